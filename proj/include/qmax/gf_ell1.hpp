#pragma once

#include "qmax/series.hpp"

namespace qmax {

// theta(lambda) = (1 - 2pq*lambda - sqrt(1-4pq*lambda)) / lambda, the small
// root of the step kernel for the RG cycle.  Its expansion is Catalan:
// [lambda^m] theta = 2 C_m (pq)^{m+1}, m >= 1, with zero constant term.
inline Series<Rat> theta_series(const Rat& p, int N) {
  if (p <= 0 || p >= 1) throw validation_error("theta_series needs 0 < p < 1");
  const Rat pq = p * (Rat(1) - p);
  Series<Rat> th(N);
  Int cat = 1;  // C_1
  Rat pq_pow = pq * pq;
  for (int m = 1; m <= N; ++m) {
    th.at(m) = Rat(2) * Rat(cat) * pq_pow;
    pq_pow *= pq;
    cat = cat * 2 * (2 * m + 1) / (m + 2);  // C_{m+1}; exact integer step
  }
  return th;
}

// The inverse relation lambda = 2 theta / (theta + 2pq)^2, expanded back in
// lambda.  Equal to the identity series when theta_series is right.
inline Series<Rat> lambda_of_theta(const Rat& p, int N) {
  const Rat two_pq = Rat(2) * p * (Rat(1) - p);
  const Series<Rat> t = theta_series(p, N);
  const Series<Rat> shifted = t + Series<Rat>::constant(two_pq, N);
  return (t * Rat(2)) / (shifted * shifted);
}

// G(lambda,0,0) = q*lambda / (1 - q*lambda): only the all-hold path stays
// pinned at the origin with a maximum of zero.
inline Series<Rat> g00_series(const Rat& p, int N) {
  const Rat q = Rat(1) - p;
  Series<Rat> num = Series<Rat>::monomial(q, 1, N);
  Series<Rat> den = Series<Rat>::constant(Rat(1), N) - num;
  return num / den;
}

// G(lambda,a,a) for a >= 1:
//   (1/(1-q*lambda)) * 2^a p^{2a} [theta^2-2(1-2p)q*theta+4p^2q^2]
//                      (theta-2pq) theta^a
//   / (2^{2a+2} p^{2a+1} q^{2a+3} (theta-2p^2) + theta^{2a+2} (theta-2q^2))
inline Series<Rat> g_aa_series(const Rat& p, int a, int N) {
  if (a < 1) throw validation_error("g_aa_series needs a >= 1");
  const Rat q = Rat(1) - p;
  const Series<Rat> th = theta_series(p, N);
  const auto cst = [&](const Rat& v) { return Series<Rat>::constant(v, N); };

  const Series<Rat> quad =
      th * th - th * (Rat(2) * (Rat(1) - Rat(2) * p) * q) + cst(Rat(4) * p * p * q * q);
  const Series<Rat> num =
      quad * (th - cst(Rat(2) * p * q)) * th.pow(a) *
      (rat_pow(Rat(2), a) * rat_pow(p, 2 * a));
  const Series<Rat> den =
      (th - cst(Rat(2) * p * p)) *
          (rat_pow(Rat(2), 2 * a + 2) * rat_pow(p, 2 * a + 1) * rat_pow(q, 2 * a + 3)) +
      th.pow(2 * a + 2) * (th - cst(Rat(2) * q * q));
  const Series<Rat> one_minus_ql =
      cst(Rat(1)) - Series<Rat>::monomial(q, 1, N);
  return num / den / one_minus_ql;
}

// P{M_2n = a} as the lambda^n coefficient, via the bracket form
//   (theta-2pq)/(1-lambda) * [ 2^a p^{2a-1} theta^a / D_a
//                              - 2^{a+1} p^{2a+1} theta^{a+1} / D_{a+1} ]
// with D_a = 2^{2a} p^{2a-1} q^{2a+1} (theta-2p^2) + theta^{2a} (theta-2q^2).
inline Series<Rat> bracket_gf(const Rat& p, int a, int N) {
  if (a < 1) throw validation_error("bracket_gf needs a >= 1");
  const Rat q = Rat(1) - p;
  const Series<Rat> th = theta_series(p, N);
  const auto cst = [&](const Rat& v) { return Series<Rat>::constant(v, N); };

  const auto D = [&](int k) {
    return (th - cst(Rat(2) * p * p)) *
               (rat_pow(Rat(2), 2 * k) * rat_pow(p, 2 * k - 1) * rat_pow(q, 2 * k + 1)) +
           th.pow(2 * k) * (th - cst(Rat(2) * q * q));
  };
  const Series<Rat> lhs =
      th.pow(a) * (rat_pow(Rat(2), a) * rat_pow(p, 2 * a - 1)) / D(a);
  const Series<Rat> rhs =
      th.pow(a + 1) * (rat_pow(Rat(2), a + 1) * rat_pow(p, 2 * a + 1)) / D(a + 1);
  return (th - cst(Rat(2) * p * q)) * (lhs - rhs) * geometric_series<Rat>(N);
}

// The standalone a=1 form: p*lambda*(1-pq*lambda) /
//   ((1-q*lambda) [pq^2 lambda^2 - (1+2p) q lambda + 1]).
inline Series<Rat> a1_closed_series(const Rat& p, int N) {
  const Rat q = Rat(1) - p;
  const auto mono = [&](const Rat& v, int d) { return Series<Rat>::monomial(v, d, N); };
  const Series<Rat> one = Series<Rat>::constant(Rat(1), N);
  const Series<Rat> num = mono(p, 1) * (one - mono(p * q, 1));
  const Series<Rat> den =
      (one - mono(q, 1)) *
      (mono(p * q * q, 2) - mono((Rat(1) + Rat(2) * p) * q, 1) + one);
  return num / den;
}

// P{M_2n = a} via the telescoping route
//   p*lambda/(1-lambda) * [G(a-1,a-1) - G(a,a)]           (a >= 2)
// At a=1 the mu->1 limit picks up the x=0 boundary stratum, adding one:
//   p*lambda/(1-lambda) * [1 + G(0,0) - G(1,1)].
inline Series<Rat> relation_gf(const Rat& p, int a, int N) {
  if (a < 1) throw validation_error("relation_gf needs a >= 1");
  const Series<Rat> lead =
      Series<Rat>::monomial(p, 1, N) * geometric_series<Rat>(N);
  if (a == 1)
    return lead * (Series<Rat>::constant(Rat(1), N) + g00_series(p, N) -
                   g_aa_series(p, 1, N));
  return lead * (g_aa_series(p, a - 1, N) - g_aa_series(p, a, N));
}

// Canonical coefficient extractor for P{M_2n = a}: evaluates the bracket and
// telescoping routes and insists they agree before returning either.
inline Series<Rat> max_gf_coeffs(const Rat& p, int a, int N) {
  const Series<Rat> b = bracket_gf(p, a, N);
  const Series<Rat> r = relation_gf(p, a, N);
  if (!(b == r))
    throw numeric_error("max-law generating function: bracket and telescoping "
                        "routes disagree (transcription bug)");
  return b;
}

// sum_n lambda^n E(M_2n) at p = 1/2:
//   (1/(1-lambda)) sum_{a>=1} 2 (2 theta)^a / (1 + (2 theta)^{2a}).
// (2 theta)^a has lambda-valuation a, so a ranges only up to N.
inline Series<Rat> em2n_gf(int N) {
  const Rat half(1, 2);
  const Series<Rat> two_theta = theta_series(half, N) * Rat(2);
  const Series<Rat> one = Series<Rat>::constant(Rat(1), N);
  Series<Rat> sum(N);
  for (int a = 1; a <= N; ++a) {
    const Series<Rat> ta = two_theta.pow(a);
    sum = sum + (ta * Rat(2)) / (one + ta * ta);
  }
  return sum * geometric_series<Rat>(N);
}

}  // namespace qmax
