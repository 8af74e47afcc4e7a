#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qmax/rational.hpp"

namespace qmax {

namespace detail {
inline double mag(double v) { return std::abs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

template <class T>
struct Solved {
  std::vector<T> x;
  double cond;  // infinity-norm condition number of the row-equilibrated matrix
};

// Dense Gaussian elimination with row equilibration and partial pivoting,
// for the small (<= 8x8) systems used here.  The condition number is exact
// (computed from an explicit inverse) and solves exceeding cond_limit throw.
template <class T>
Solved<T> solve_dense(std::vector<std::vector<T>> a, std::vector<T> b,
                      double cond_limit = 1e12) {
  const int n = static_cast<int>(a.size());
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n)
      throw numeric_error("solve_dense requires a square matrix");
  if (static_cast<int>(b.size()) != n)
    throw numeric_error("solve_dense: rhs length mismatch");

  // Row equilibration keeps the appendix systems' wildly different row
  // scales from poisoning both pivoting and the condition estimate.
  for (int i = 0; i < n; ++i) {
    double m = 0;
    for (int j = 0; j < n; ++j) m = std::max(m, detail::mag(a[i][j]));
    if (m == 0) throw numeric_error("solve_dense: zero row");
    for (int j = 0; j < n; ++j) a[i][j] /= m;
    b[i] /= m;
  }

  double norm_a = 0;
  for (int i = 0; i < n; ++i) {
    double r = 0;
    for (int j = 0; j < n; ++j) r += detail::mag(a[i][j]);
    norm_a = std::max(norm_a, r);
  }

  // Augment with the identity so one sweep yields both solution and inverse.
  std::vector<std::vector<T>> aug(n, std::vector<T>(n + 1 + n, T(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
    aug[i][n + 1 + i] = T(1);
  }

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (detail::mag(aug[r][col]) > detail::mag(aug[piv][col])) piv = r;
    if (detail::mag(aug[piv][col]) < 1e-300)
      throw numeric_error("solve_dense: singular matrix");
    std::swap(aug[col], aug[piv]);
    const T inv_p = T(1) / aug[col][col];
    for (int j = col; j < 2 * n + 1; ++j) aug[col][j] *= inv_p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = aug[r][col];
      if (f == T(0)) continue;
      for (int j = col; j < 2 * n + 1; ++j) aug[r][j] -= f * aug[col][j];
    }
  }

  double norm_inv = 0;
  for (int i = 0; i < n; ++i) {
    double r = 0;
    for (int j = 0; j < n; ++j) r += detail::mag(aug[i][n + 1 + j]);
    norm_inv = std::max(norm_inv, r);
  }

  Solved<T> out;
  out.cond = norm_a * norm_inv;
  if (out.cond > cond_limit)
    throw numeric_error("solve_dense: condition number " + std::to_string(out.cond) +
                        " exceeds limit " + std::to_string(cond_limit));
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = aug[i][n];
  return out;
}

}  // namespace qmax
