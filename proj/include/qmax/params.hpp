#pragma once

#include <algorithm>

#include "qmax/rational.hpp"

namespace qmax {

enum class Phase { arrival, departure };
enum class Mode { exact, floating };

// Model configuration: cars arrive with probability p during each of the
// first ell steps of a 2*ell-cycle (red), and depart with probability q=1-p
// during each of the last ell steps (green).
struct Params {
  Rat p;
  Rat q;
  int ell = 1;
  Mode mode = Mode::exact;

  double p_d() const { return to_double(p); }
  double q_d() const { return to_double(q); }
};

inline Params validate_params(const Rat& p, int ell, Mode mode = Mode::exact) {
  if (p <= 0) throw validation_error("p must be positive");
  if (p > Rat(1, 2)) throw validation_error("p>q violates p<=q");
  if (ell < 1) throw validation_error("ell must be >= 1");
  return Params{p, Rat(1) - p, ell, mode};
}

inline Params validate_params(long num, long den, int ell, Mode mode = Mode::exact) {
  if (den <= 0) throw validation_error("denominator must be positive");
  Rat p(num, den);
  p.canonicalize();
  return validate_params(p, ell, mode);
}

// Step i (1-based) is an arrival step iff i = 1..ell (mod 2*ell).
inline Phase phase_of(long i, int ell) {
  if (i < 1 || ell < 1) throw validation_error("phase_of requires i>=1, ell>=1");
  return ((i - 1) % (2L * ell)) < ell ? Phase::arrival : Phase::departure;
}

// A(n): number of arrival steps among 1..n; a hard ceiling for both S_n and M_n.
inline long arrival_count(long n, int ell) {
  const long cycle = 2L * ell;
  return ell * (n / cycle) + std::min(n % cycle, static_cast<long>(ell));
}

}  // namespace qmax
