#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qmax/montecarlo.hpp"
#include "qmax/walk.hpp"

namespace qmax {

// Catalan's constant G = sum_{k>=0} (-1)^k/(2k+1)^2 via the Cohen /
// Rodriguez Villegas / Zagier Chebyshev acceleration; n=40 leaves the
// truncation error at (3+sqrt 8)^-40, far below double precision.
inline double catalan_constant() {
  const int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c / static_cast<double>((2 * k + 1) * (2 * k + 1));
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1));
  }
  return s / d;
}

// t * sum_{a>=1} sech(a t): the left-endpoint Riemann sum of sech over
// (0,inf), so it tends to pi/2 as t -> 0+ with error O(t).
inline double sech_sum(double t) {
  if (!(t > 0.0)) throw validation_error("sech_sum needs t > 0");
  double s = 0.0;
  for (long a = 1;; ++a) {
    const double v = 1.0 / std::cosh(static_cast<double>(a) * t);
    if (v < 1e-18) break;
    s += v;
  }
  return t * s;
}

struct LimitConstants {
  double first;   // sqrt(pi/8): limit of E(M_n)/sqrt(n) at p = 1/2
  double second;  // G/2:        limit of E(M_n^2)/n  at p = 1/2
};

inline LimitConstants limit_constants() {
  return {std::sqrt(std::atan(1.0) / 2.0), catalan_constant() / 2.0};
}

enum class LimitMethod { dp, mc };

struct LimitRow {
  long n = 0;
  double estimate_first = 0;   // E(M_n)/sqrt(n)
  double estimate_second = 0;  // E(M_n^2)/n
  LimitMethod method = LimitMethod::dp;
  bool has_stderr = false;  // true iff method == mc
  double stderr_first = 0;
  double stderr_second = 0;
};

struct LimitReport {
  double p = 0;
  int ell = 1;
  std::vector<LimitRow> rows;  // sorted by n
  double reference_first = 0;
  double reference_second = 0;
};

// Scaled-moment trajectory toward the p = 1/2 limits.  The references are
// Abel limits; finite-n agreement here is "consistent with" them, nothing
// stronger.  dp rows are exact-distribution means and carry no stderr; they
// are capped at n = 2000 since the joint table grows quadratically in the
// support width.
inline LimitReport convergence_report(const Rat& p, int ell, std::vector<long> n_list,
                                      LimitMethod method, long reps = 10000,
                                      std::uint64_t seed = 1) {
  validate_params(p, ell, Mode::floating);
  if (n_list.empty()) throw validation_error("convergence_report needs at least one n");
  for (long n : n_list)
    if (n < 1) throw validation_error("convergence_report needs n >= 1");
  if (method == LimitMethod::dp) {
    for (long n : n_list)
      if (n > 2000)
        throw numeric_error(
            "dp convergence rows are limited to n <= 2000; use method=mc for "
            "larger n");
  }
  std::sort(n_list.begin(), n_list.end());

  LimitReport rep;
  rep.p = to_double(p);
  rep.ell = ell;
  const LimitConstants ref = limit_constants();
  rep.reference_first = ref.first;
  rep.reference_second = ref.second;

  const double pd = to_double(p);
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const long n = n_list[i];
    const double sqn = std::sqrt(static_cast<double>(n));
    LimitRow row;
    row.n = n;
    row.method = method;
    if (method == LimitMethod::dp) {
      const std::vector<double> dist = max_dist<double>(pd, ell, n, default_a_cap(n, ell));
      double m1 = 0, m2 = 0;
      for (std::size_t a = 0; a < dist.size(); ++a) {
        m1 += static_cast<double>(a) * dist[a];
        m2 += static_cast<double>(a) * static_cast<double>(a) * dist[a];
      }
      row.estimate_first = m1 / sqn;
      row.estimate_second = m2 / static_cast<double>(n);
    } else {
      SimConfig cfg;
      cfg.params = Params{p, Rat(1) - p, ell, Mode::floating};
      cfg.n = n;
      cfg.reps = reps;
      cfg.seed = seed;
      // one disjoint stream block per row; blocks are positional, so the
      // report is a pure function of (p, ell, n_list, reps, seed)
      cfg.stream_base = static_cast<std::uint64_t>(i) << 40;
      const SimResult sim = estimate_moments(cfg);
      row.estimate_first = sim.mean_max / sqn;
      row.estimate_second = sim.mean_max_sq / static_cast<double>(n);
      row.has_stderr = true;
      row.stderr_first = sim.stderr_mean / sqn;
      row.stderr_second = sim.stderr_sq / static_cast<double>(n);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace qmax
