#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qmax/linalg.hpp"
#include "qmax/polyroots.hpp"
#include "qmax/walk.hpp"

namespace qmax {

// Limiting law of the queue length S_n for p < q, as the rational pgf
// H(z) = num(z)/den(z) built from the ell unit-disk roots of
// z^ell = (q+pz)^{2*ell} and their boundary weights.
struct StationaryModel {
  double p = 0, q = 0;
  int ell = 1;
  std::vector<cplx> roots;    // inside the closed unit disk; roots[0] == 1
  std::vector<cplx> outside;  // the remaining ell roots
  std::vector<cplx> weights;
  std::vector<cplx> num, den;  // H = num/den, coefficients low to high
  double weight_cond = 0;
};

// (q+pz)^{2*ell} - z^ell, low to high.
inline std::vector<double> char_poly(double p, int ell) {
  const double q = 1.0 - p;
  std::vector<double> c(2 * ell + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= 2 * ell; ++k) {
    c[k] = binom * std::pow(q, 2 * ell - k) * std::pow(p, k);
    binom = binom * (2 * ell - k) / (k + 1);
  }
  c[ell] -= 1.0;
  return c;
}

struct CharRoots {
  std::vector<cplx> inside;   // exactly ell of them, inside[0] == 1
  std::vector<cplx> outside;  // the rest
};

inline CharRoots char_roots(double p, int ell) {
  if (!(p > 0)) throw validation_error("p must be positive");
  if (!(p < 0.5)) throw validation_error("stationary distribution requires p<q");
  if (ell < 1) throw validation_error("ell must be >= 1");

  const std::vector<double> poly = char_poly(p, ell);
  std::vector<cplx> all = poly_roots(poly);

  CharRoots out;
  for (const cplx& z : all)
    (std::abs(z) <= 1.0 + 1e-9 ? out.inside : out.outside).push_back(z);
  if (static_cast<int>(out.inside.size()) != ell)
    throw numeric_error("expected exactly ell roots in the closed unit disk, got " +
                        std::to_string(out.inside.size()));

  // z=1 always solves the equation; pin it exactly and put it first.
  size_t at_one = 0;
  for (size_t k = 1; k < out.inside.size(); ++k)
    if (std::abs(out.inside[k] - 1.0) < std::abs(out.inside[at_one] - 1.0)) at_one = k;
  if (std::abs(out.inside[at_one] - 1.0) > 1e-6)
    throw numeric_error("root z=1 not found among the unit-disk roots");
  std::swap(out.inside[0], out.inside[at_one]);
  out.inside[0] = 1.0;

  auto by_value = [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(out.inside.begin() + 1, out.inside.end(), by_value);
  std::sort(out.outside.begin(), out.outside.end(), by_value);

  for (size_t i = 0; i < out.inside.size(); ++i)
    for (size_t j = i + 1; j < out.inside.size(); ++j)
      if (std::abs(out.inside[i] - out.inside[j]) < 1e-8)
        throw numeric_error("coincident unit-disk roots break the weight system");
  return out;
}

// Vandermonde system in r_k = z_k/(q+p z_k): the z=1 row fixes the total
// weight sum_j w_j = (q-p) ell / q; the other inside roots contribute
// homogeneous rows.
inline Solved<cplx> solve_weights(double p, int ell, const std::vector<cplx>& inside) {
  const double q = 1.0 - p;
  std::vector<std::vector<cplx>> a(ell, std::vector<cplx>(ell));
  std::vector<cplx> b(ell, 0.0);
  for (int i = 0; i < ell; ++i) {
    const cplx r = inside[i] / (q + p * inside[i]);
    cplx pw = 1.0;
    for (int j = 0; j < ell; ++j, pw *= r) a[i][j] = pw;
  }
  b[0] = (q - p) * ell / q;
  return solve_dense(a, b);
}

namespace detail {
// coefficients of (q+pz)^m, low to high
inline std::vector<cplx> qpz_pow(double p, double q, int m) {
  std::vector<cplx> c(m + 1);
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    c[k] = binom * std::pow(q, m - k) * std::pow(p, k);
    binom = binom * (m - k) / (k + 1);
  }
  return c;
}
}  // namespace detail

// H(z) as a polynomial ratio:
//   num(z) = q (z-1) sum_k w_k z^k (q+pz)^{ell-1-k}
//   den(z) = z^ell - (q+pz)^{2*ell}
// Every unit-disk root of den also kills num, so H is analytic on |z| <= 1.
inline StationaryModel build_pgf(double p, int ell) {
  const CharRoots roots = char_roots(p, ell);
  const Solved<cplx> w = solve_weights(p, ell, roots.inside);
  const double q = 1.0 - p;

  StationaryModel m;
  m.p = p;
  m.q = q;
  m.ell = ell;
  m.roots = roots.inside;
  m.outside = roots.outside;
  m.weights = w.x;
  m.weight_cond = w.cond;

  std::vector<cplx> acc(ell + 1, 0.0);
  for (int k = 0; k < ell; ++k) {
    const std::vector<cplx> bp = detail::qpz_pow(p, q, ell - 1 - k);
    for (size_t j = 0; j < bp.size(); ++j) acc[k + j] += m.weights[k] * bp[j];
  }
  m.num.assign(ell + 2, 0.0);
  for (int j = 0; j <= ell; ++j) {
    m.num[j + 1] += q * acc[j];
    m.num[j] -= q * acc[j];
  }

  m.den.assign(2 * ell + 1, 0.0);
  const std::vector<cplx> b2 = detail::qpz_pow(p, q, 2 * ell);
  for (size_t j = 0; j < b2.size(); ++j) m.den[j] -= b2[j];
  m.den[ell] += 1.0;
  return m;
}

// H at a point; 0/0 at the shared roots of num and den (z=1 included) is
// resolved by one l'Hopital step -- all such roots are simple.
inline cplx pgf_value(const StationaryModel& m, cplx z) {
  const cplx dv = poly_eval(m.den, z);
  double scale = 0;
  for (const cplx& c : m.den) scale += std::abs(c);
  if (std::abs(dv) > 1e-9 * std::max(1.0, scale))
    return poly_eval(m.num, z) / dv;
  return poly_eval(poly_derivative(m.num), z) / poly_eval(poly_derivative(m.den), z);
}

// pmf by partial fractions over the outside roots:
//   P{S=x} = -sum_{zeta outside} num(zeta)/den'(zeta) zeta^{-x-1}.
// The unit-disk factors of den cancel against num, so expanding only the
// outside poles is exact and, unlike direct long division, keeps roundoff
// from exciting |z_inside|^{-x} growth.
inline std::vector<double> stationary_pmf(const StationaryModel& m, int x_max) {
  if (x_max < 0) throw validation_error("x_max must be >= 0");
  const std::vector<cplx> dden = poly_derivative(m.den);
  std::vector<double> out(x_max + 1, 0.0);
  double worst_imag = 0;
  for (int x = 0; x <= x_max; ++x) {
    cplx acc = 0;
    for (const cplx& zeta : m.outside)
      acc -= poly_eval(m.num, zeta) / poly_eval(dden, zeta) * std::pow(zeta, -x - 1.0);
    worst_imag = std::max(worst_imag, std::abs(acc.imag()));
    out[x] = acc.real();
  }
  if (worst_imag > 1e-8)
    throw numeric_error("stationary pmf has non-cancelling imaginary parts");
  return out;
}

// Taylor coefficients of H's series expansion, computed term-by-term from
// the den-side linear recurrence.  Numerically reliable only while
// |z_inside|^{-x} stays small; kept as an independent cross-check path.
inline std::vector<double> stationary_pmf_long_division(const StationaryModel& m,
                                                        int x_max) {
  std::vector<cplx> c(x_max + 1, 0.0);
  for (int x = 0; x <= x_max; ++x) {
    cplx acc = x < static_cast<int>(m.num.size()) ? m.num[x] : cplx(0);
    for (int j = 1; j < static_cast<int>(m.den.size()) && j <= x; ++j)
      acc -= m.den[j] * c[x - j];
    c[x] = acc / m.den[0];
  }
  std::vector<double> out(x_max + 1);
  for (int x = 0; x <= x_max; ++x) out[x] = c[x].real();
  return out;
}

struct StationaryMoments {
  double normalization;  // H(1); 1 up to roundoff
  double mean;           // H'(1)
  double second_factorial;  // H''(1) = E S(S-1)
};

// num and den both vanish at z=1; expand each around z=1, drop the shared
// (z-1) factor, and divide the short Taylor series.
inline StationaryMoments stationary_moments(const StationaryModel& m) {
  static constexpr int K = 4;
  auto taylor_at_1 = [](const std::vector<cplx>& poly) {
    std::vector<cplx> t(K + 1, 0.0);
    for (int i = 0; i < static_cast<int>(poly.size()); ++i) {
      double binom = 1.0;
      for (int k = 0; k <= std::min(i, K); ++k) {
        t[k] += poly[i] * binom;
        binom = binom * (i - k) / (k + 1);
      }
    }
    return t;
  };
  const std::vector<cplx> a = taylor_at_1(m.num), b = taylor_at_1(m.den);
  if (std::abs(a[0]) > 1e-9 || std::abs(b[0]) > 1e-9)
    throw numeric_error("pgf numerator/denominator do not vanish at z=1");

  const cplx c0 = a[1] / b[1];
  const cplx c1 = (a[2] - b[2] * c0) / b[1];
  const cplx c2 = (a[3] - b[2] * c1 - b[3] * c0) / b[1];
  return StationaryMoments{c0.real(), c1.real(), 2.0 * c2.real()};
}

// Full pipeline with the normalization consistency gate.
inline StationaryModel stationary_model(double p, int ell) {
  StationaryModel m = build_pgf(p, ell);
  const StationaryMoments mo = stationary_moments(m);
  if (std::abs(mo.normalization - 1.0) > 1e-8)
    throw numeric_error("pgf normalization H(1) deviates from 1 by " +
                        std::to_string(std::abs(mo.normalization - 1.0)));
  return m;
}

// Total-variation distance between the limit law and the exact S_n marginal
// after n steps; n must close a full cycle, where the limit is attained.
inline double tv_distance_to_dp(const StationaryModel& m, long n) {
  if (n % (2L * m.ell) != 0)
    throw validation_error("mixing check wants n to be a multiple of 2*ell");
  const std::vector<double> dp = s_marginal_dp(m.p, m.ell, n);
  const std::vector<double> pmf = stationary_pmf(m, static_cast<int>(dp.size()) - 1);
  double tv = 0;
  for (size_t x = 0; x < dp.size(); ++x) tv += std::abs(dp[x] - pmf[x]);
  return tv / 2;
}

// The limit law is phase-dependent within the cycle: TV distance of the
// S_n marginal from the end-of-cycle limit, per offset r = 0..2*ell-1.
inline std::vector<double> phase_tv_scan(const StationaryModel& m, long n_base) {
  if (n_base % (2L * m.ell) != 0)
    throw validation_error("phase scan wants a cycle-aligned base step count");
  std::vector<double> out;
  for (int r = 0; r < 2 * m.ell; ++r) {
    const std::vector<double> dp = s_marginal_dp(m.p, m.ell, n_base + r);
    const std::vector<double> pmf = stationary_pmf(m, static_cast<int>(dp.size()) - 1);
    double tv = 0;
    for (size_t x = 0; x < dp.size(); ++x) tv += std::abs(dp[x] - pmf[x]);
    out.push_back(tv / 2);
  }
  return out;
}

}  // namespace qmax
