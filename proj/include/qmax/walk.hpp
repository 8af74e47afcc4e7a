#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include "qmax/joint_table.hpp"

namespace qmax {

// Default truncation for floating-mode runs: M_n concentrates at scale
// sqrt(n), so 6 standard widths plus one cycle of headroom keeps the lost
// mass below 1e-10 even at p=1/2.
inline long default_a_cap(long n, int ell) {
  return std::max<long>(32, static_cast<long>(std::ceil(6.0 * std::sqrt(n / 2.0))) + ell);
}

// One transition of the joint (S, M) law.  Mass is pushed forward along the
// two outcomes of the step's Bernoulli draw:
//   arrival:   (x,a) -> (x+1, max(a,x+1)) w.p. p   |  (x,a) w.p. q
//   departure: (x,a) -> (max(x-1,0), a)   w.p. q   |  (x,a) w.p. p
template <class T>
JointTable<T> dp_step(const JointTable<T>& t, Phase kind, const T& p) {
  const T q = T(1) - p;
  JointTable<T> out;
  out.n = t.n + 1;
  out.ell = t.ell;
  out.a_cap = t.a_cap;
  out.lost_mass = t.lost_mass;

  long new_amax = t.amax();
  if (kind == Phase::arrival && (t.a_cap < 0 || new_amax < t.a_cap)) ++new_amax;
  out.f.assign(new_amax + 1, {});
  for (long a = 0; a <= new_amax; ++a) out.f[a].assign(a + 1, T(0));

  for (long a = 0; a <= t.amax(); ++a) {
    for (long x = 0; x <= a; ++x) {
      const T& w = t.f[a][x];
      if (w == T(0)) continue;
      if (kind == Phase::arrival) {
        out.f[a][x] += q * w;
        if (x < a) {
          out.f[a][x + 1] += p * w;
        } else if (t.a_cap < 0 || a + 1 <= t.a_cap) {
          out.f[a + 1][x + 1] += p * w;
        } else {
          if constexpr (std::is_same_v<T, Rat>)
            throw numeric_error("exact mode never truncates; raise a_cap");
          out.lost_mass += p * w;
        }
      } else {
        out.f[a][x] += p * w;
        out.f[a][x > 0 ? x - 1 : 0] += q * w;
      }
    }
  }
  return out;
}

// Joint law of (S_n, M_n) from n one-step transitions.  max_states guards
// runaway exact-mode tables (the triangle holds ~A(n)^2/2 entries).
template <class T>
JointTable<T> joint_dist(const T& p, int ell, long n, long a_cap = -1,
                         long max_states = 60'000'000) {
  if (n < 0) throw validation_error("n must be >= 0");
  const long amax_final = a_cap >= 0 ? std::min(a_cap, arrival_count(n, ell))
                                     : arrival_count(n, ell);
  if ((amax_final + 1) * (amax_final + 2) / 2 > max_states)
    throw numeric_error("joint table would exceed the configured state limit");

  JointTable<T> t = JointTable<T>::origin(ell, a_cap);
  for (long i = 1; i <= n; ++i) t = dp_step(t, phase_of(i, ell), p);
  return t;
}

template <class T>
std::vector<T> max_dist(const T& p, int ell, long n, long a_cap = -1) {
  return joint_dist(p, ell, n, a_cap).max_marginal();
}

// P{S_n = x} alone, tracked as a flat vector; O(n * A(n)) instead of the
// joint table's O(n * A(n)^2), which matters for the n ~ 4000 mixing checks.
inline std::vector<double> s_marginal_dp(double p, int ell, long n) {
  const double q = 1.0 - p;
  const long size = arrival_count(n, ell) + 1;
  std::vector<double> v(size, 0.0), nv(size, 0.0);
  v[0] = 1.0;
  for (long i = 1; i <= n; ++i) {
    if (phase_of(i, ell) == Phase::arrival) {
      nv[0] = q * v[0];
      for (long x = 1; x < size; ++x) nv[x] = p * v[x - 1] + q * v[x];
    } else {
      nv[0] = v[0] + (size > 1 ? q * v[1] : 0.0);
      for (long x = 1; x < size; ++x)
        nv[x] = p * v[x] + (x + 1 < size ? q * v[x + 1] : 0.0);
    }
    std::swap(v, nv);
  }
  return v;
}

}  // namespace qmax
