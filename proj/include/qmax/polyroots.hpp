#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qmax/rational.hpp"

namespace qmax {

using cplx = std::complex<double>;

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
  cplx v = 0;
  for (size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

inline cplx poly_eval(const std::vector<double>& c, cplx z) {
  cplx v = 0;
  for (size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

template <class C>
std::vector<C> poly_derivative(const std::vector<C>& c) {
  std::vector<C> d(c.size() > 1 ? c.size() - 1 : 1, C(0));
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
  return d;
}

// All complex roots of sum_k c[k] z^k (coefficients low to high) by
// Durand-Kerner iteration followed by a few Newton polishing steps per root.
// Degrees here are tiny (<= 2*ell), so simplicity beats sophistication.
inline std::vector<cplx> poly_roots(const std::vector<double>& coeffs,
                                    int max_iter = 400, double tol = 1e-14) {
  std::vector<double> c = coeffs;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) throw numeric_error("poly_roots: degree must be >= 1");

  std::vector<cplx> monic(c.size());
  for (size_t k = 0; k < c.size(); ++k) monic[k] = c[k] / c.back();

  double bound = 0;
  for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(monic[k]));
  const double radius = 1.0 + bound;

  std::vector<cplx> z(deg);
  for (int k = 0; k < deg; ++k) {
    const double angle = 2.0 * M_PI * k / deg + 0.4;  // no root is favored
    z[k] = 0.9 * radius * cplx(std::cos(angle), std::sin(angle));
  }

  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0;
    for (int k = 0; k < deg; ++k) {
      cplx denom = 1;
      for (int j = 0; j < deg; ++j)
        if (j != k) denom *= z[k] - z[j];
      const cplx step = poly_eval(monic, z[k]) / denom;
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (worst < tol) break;
  }

  const std::vector<double> dc = [&] {
    std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
    return d;
  }();
  for (auto& r : z)
    for (int s = 0; s < 3; ++s) {
      const cplx dp = poly_eval(dc, r);
      if (std::abs(dp) < 1e-300) break;
      r -= poly_eval(c, r) / dp;
    }
  return z;
}

}  // namespace qmax
