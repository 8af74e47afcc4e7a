#pragma once

#include <vector>

#include "qmax/params.hpp"

namespace qmax {

// Dense triangular table of the joint law P{S_n=x, M_n=a}, stored as
// f[a][x] for 0 <= x <= a. T is an exact rational or a floating type.
// a_cap < 0 means no truncation; with a_cap >= 0, mass that would climb past
// a_cap is accumulated in lost_mass instead (floating mode only).
template <class T>
struct JointTable {
  long n = 0;
  int ell = 1;
  long a_cap = -1;
  T lost_mass{};
  std::vector<std::vector<T>> f;

  static JointTable origin(int ell, long a_cap = -1) {
    JointTable t;
    t.ell = ell;
    t.a_cap = a_cap;
    t.f = {{T(1)}};
    return t;
  }

  long amax() const { return static_cast<long>(f.size()) - 1; }

  // Zero outside the stored triangle.
  T value(long x, long a) const {
    if (a < 0 || a > amax() || x < 0 || x > a) return T(0);
    return f[a][x];
  }

  T total() const {
    T s(0);
    for (const auto& row : f)
      for (const auto& v : row) s += v;
    return s;
  }

  std::vector<T> max_marginal() const {
    std::vector<T> out(f.size(), T(0));
    for (long a = 0; a <= amax(); ++a)
      for (long x = 0; x <= a; ++x) out[a] += f[a][x];
    return out;
  }

  std::vector<T> state_marginal() const {
    std::vector<T> out(f.size(), T(0));
    for (long a = 0; a <= amax(); ++a)
      for (long x = 0; x <= a; ++x) out[x] += f[a][x];
    return out;
  }
};

// sum_k k^moment * dist[k]
template <class T>
T moment(const std::vector<T>& dist, int k) {
  T s(0);
  for (long v = 0; v < static_cast<long>(dist.size()); ++v) {
    T term = dist[v];
    for (int j = 0; j < k; ++j) term *= T(v);
    s += term;
  }
  return s;
}

}  // namespace qmax
