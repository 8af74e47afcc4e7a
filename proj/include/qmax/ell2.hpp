#pragma once

#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "qmax/linalg.hpp"
#include "qmax/walk.hpp"

// Closed forms for the RRGG cycle's maximum-law generating function
// G(lambda,x,a) = sum_n lambda^n P{S_4n=x, M_4n=a}, together with the
// linear-system cascade that re-derives the same values independently.
// Everything here is double precision on the principal branch
// 0 < lambda, 4pq sqrt(lambda) < 1.
namespace qmax::ell2 {

struct QuarticZeros {
  double p, q, lam, sqrt_lam;
  double theta, omega;
  std::array<double, 4> zeros;  // theta/2p^2, 2q^2/theta, omega/2p^2, 2q^2/omega
};

// mu-kernel of the four-step functional equation:
//   p^4 mu^4 + 4p^3 q mu^3 + 6p^2 q^2 mu^2 - mu^2/lambda + 4p q^3 mu + q^4
inline double kernel_quartic(double p, double lam, double mu) {
  const double q = 1.0 - p;
  const double pm = p * mu;
  return pm * pm * pm * pm + 4 * p * p * p * q * mu * mu * mu +
         6 * p * p * q * q * mu * mu - mu * mu / lam + 4 * p * q * q * q * mu +
         q * q * q * q;
}

// The quartic factors through two quadratic kernels; theta and omega are the
// corresponding small roots evaluated at s = sqrt(lambda) and -s.
inline QuarticZeros quartic_zeros(double p, double lam) {
  if (!(p > 0.0 && p <= 0.5)) throw validation_error("quartic_zeros needs 0 < p <= 1/2");
  if (!(lam > 0.0)) throw validation_error("quartic_zeros needs lambda > 0");
  const double q = 1.0 - p;
  const double s = std::sqrt(lam);
  if (!(4 * p * q * s < 1.0))
    throw validation_error("branch violation: need 4pq*sqrt(lambda) < 1");
  QuarticZeros z;
  z.p = p;
  z.q = q;
  z.lam = lam;
  z.sqrt_lam = s;
  z.theta = (1 - 2 * p * q * s - std::sqrt(1 - 4 * p * q * s)) / s;
  z.omega = (-1 - 2 * p * q * s - std::sqrt(1 + 4 * p * q * s)) / s;
  z.zeros = {z.theta / (2 * p * p), 2 * q * q / z.theta, z.omega / (2 * p * p),
             2 * q * q / z.omega};
  return z;
}

inline double delta1(double p, double q, double th) {
  const double A = 22 * p * p - q - 3 * p * q;
  const double B = 8 * p * p - q - 3 * p * q;
  const double C = 35 * p * p - 5 * q - 17 * p * q;
  const auto pw = [](double v, int e) { return std::pow(v, e); };
  return 256 * pw(p, 8) * pw(q, 8) + 1024 * pw(p, 7) * pw(q, 7) * th +
         64 * pw(p, 4) * pw(q, 6) * A * pw(th, 2) +
         128 * pw(p, 3) * pw(q, 5) * B * pw(th, 3) +
         16 * p * p * pw(q, 4) * C * pw(th, 4) +
         32 * p * pw(q, 3) * B * pw(th, 5) + 4 * q * q * A * pw(th, 6) +
         16 * p * q * pw(th, 7) + pw(th, 8);
}

inline double gamma_poly(double p, double q, double th, double om) {
  const double pq = p * q;
  const double f1 = th * th + 2 * (2 * p - 1) * q * th + 4 * pq * pq;
  const double f2 = th * th + 2 * (2 * p + 1) * q * th + 4 * pq * pq;
  const double f3 = std::pow(th, 4) + 8 * pq * std::pow(th, 3) +
                    36 * pq * pq * th * th + 32 * std::pow(pq, 3) * th +
                    16 * std::pow(pq, 4);
  const double w0 = 4 * pq * pq * std::pow(th + 2 * pq, 4);
  const double w1 = 4 * pq * (th + pq) * (th + 4 * pq) *
                    (th * th - 2 * q * q * th + 4 * pq * pq);
  const double w2 = std::pow(th, 4) + 2 * (3 * p - 1) * q * std::pow(th, 3) -
                    8 * p * (1 + q) * q * q * th * th +
                    8 * p * p * (3 * p - 1) * std::pow(q, 3) * th +
                    16 * std::pow(pq, 4);
  const double w3 = -2 * (1 + p) * q * th * th;
  return f1 * f2 * f3 * (w0 + w1 * om + w2 * om * om + w3 * om * om * om);
}

// delta2 monomials as (coefficient, p-, q-, theta-, omega-exponent).
struct D2Term {
  int c;
  unsigned char ep, eq, et, eo;
};
inline constexpr D2Term kDelta2Terms[] = {
    {4096, 12, 12, 0, 0}, {8192, 11, 11, 1, 0}, {-2048, 10, 12, 1, 0},
    {7168, 10, 10, 2, 0}, {-4096, 9, 11, 2, 0}, {5120, 9, 9, 3, 0},
    {-3072, 8, 10, 3, 0}, {3072, 8, 8, 4, 0},   {-1536, 7, 9, 4, 0},
    {1280, 7, 7, 5, 0},   {-768, 6, 8, 5, 0},   {448, 6, 6, 6, 0},
    {-256, 5, 7, 6, 0},   {128, 5, 5, 7, 0},    {-32, 4, 6, 7, 0},
    {16, 4, 4, 8, 0},
    {-2048, 10, 12, 0, 1}, {2048, 10, 10, 1, 1}, {1024, 8, 11, 1, 1},
    {-5120, 9, 11, 1, 1},  {6144, 9, 9, 2, 1},   {2048, 7, 10, 2, 1},
    {-5632, 8, 10, 2, 1},  {7424, 8, 8, 3, 1},   {1536, 6, 9, 3, 1},
    {-4096, 7, 9, 3, 1},   {4864, 7, 7, 4, 1},   {768, 5, 8, 4, 1},
    {-2304, 6, 8, 4, 1},   {1856, 6, 6, 5, 1},   {384, 4, 7, 5, 1},
    {-1024, 5, 7, 5, 1},   {384, 5, 5, 6, 1},    {128, 3, 6, 6, 1},
    {-352, 4, 6, 6, 1},    {32, 4, 4, 7, 1},     {16, 2, 5, 7, 1},
    {-80, 3, 5, 7, 1},     {-8, 2, 4, 8, 1},
    {1024, 10, 10, 0, 2}, {4096, 9, 9, 1, 2},  {-512, 8, 10, 1, 2},
    {6144, 8, 8, 2, 2},   {-2048, 7, 9, 2, 2}, {5120, 7, 7, 3, 2},
    {-2944, 6, 8, 3, 2},  {2944, 6, 6, 4, 2},  {-2048, 5, 7, 4, 2},
    {1280, 5, 5, 5, 2},   {-736, 4, 6, 5, 2},  {384, 4, 4, 6, 2},
    {-128, 3, 5, 6, 2},   {64, 3, 3, 7, 2},    {-8, 2, 4, 7, 2},
    {4, 2, 2, 8, 2},
    {1024, 9, 9, 0, 3},  {3328, 8, 8, 1, 3},  {3328, 7, 7, 2, 3},
    {-256, 5, 8, 2, 3},  {-896, 6, 8, 2, 3},  {1984, 6, 6, 3, 3},
    {-256, 4, 7, 3, 3},  {-1280, 5, 7, 3, 3}, {1088, 5, 5, 4, 3},
    {-64, 3, 6, 4, 3},   {-768, 4, 6, 4, 3},  {496, 4, 4, 5, 3},
    {-64, 2, 5, 5, 3},   {-320, 3, 5, 5, 3},  {208, 3, 3, 6, 3},
    {-16, 1, 4, 6, 3},   {-56, 2, 4, 6, 3},   {52, 2, 2, 7, 3},
    {4, 1, 1, 8, 3},
    {256, 8, 8, 0, 4},  {768, 7, 7, 1, 4},  {640, 6, 6, 2, 4},
    {-64, 4, 7, 2, 4},  {-192, 5, 7, 2, 4}, {320, 5, 5, 3, 4},
    {-64, 3, 6, 3, 4},  {-224, 4, 6, 3, 4}, {176, 4, 4, 4, 4},
    {-16, 2, 5, 4, 4},  {-112, 3, 5, 4, 4}, {80, 3, 3, 5, 4},
    {-16, 1, 4, 5, 4},  {-56, 2, 4, 5, 4},  {40, 2, 2, 6, 4},
    {-4, 0, 3, 6, 4},   {-12, 1, 3, 6, 4},  {12, 1, 1, 7, 4},
    {1, 0, 0, 8, 4},
};

inline double delta2(double p, double q, double th, double om) {
  double pp[13], qp[13], tp[9], op[5];
  pp[0] = qp[0] = tp[0] = op[0] = 1.0;
  for (int i = 1; i <= 12; ++i) pp[i] = pp[i - 1] * p;
  for (int i = 1; i <= 12; ++i) qp[i] = qp[i - 1] * q;
  for (int i = 1; i <= 8; ++i) tp[i] = tp[i - 1] * th;
  for (int i = 1; i <= 4; ++i) op[i] = op[i - 1] * om;
  double s = 0;
  for (const D2Term& t : kDelta2Terms)
    s += t.c * pp[t.ep] * qp[t.eq] * tp[t.et] * op[t.eo];
  return s;
}

// The three printed closed forms.  For (0,2) omega enters negated: the
// as-printed sign gives exactly minus the value of both independent
// derivations (cascade and partial sums) everywhere on the branch, so the
// net sign here is fixed to match them.
inline double closed_form_g(double p, double lam, int x, int a) {
  const QuarticZeros z = quartic_zeros(p, lam);
  const double q = z.q, th = z.theta, om = z.omega;
  if (q * q * lam >= 1.0) throw validation_error("need q^2*lambda < 1");
  const double d1 = delta1(p, q, th);
  const double pref = 1.0 / ((1 - q * q * lam) * d1);
  if (x == 0 && a == 1)
    return 8 * p * (1 + p) * q * q * std::pow(th + 2 * p * q, 4) * th * th * pref;
  if (x == 1 && a == 1)
    return 8 * std::pow(p, 3) * q *
           (th * th + 2 * (2 * p - 1) * q * th + 4 * p * p * q * q) *
           (th * th + 2 * (2 * p + 1) * q * th + 4 * p * p * q * q) * th * th * pref;
  if (x == 0 && a == 2)
    return 4 * p * p * q * q * std::pow(th + 2 * p * q, 2) * th * (-om) *
           gamma_poly(p, q, th, om) * pref / delta2(p, q, th, om);
  throw validation_error("closed_form_g covers (0,1), (1,1), (0,2) only");
}

struct PartialSum {
  double value;
  double tail_bound;
};

// Truncated series oracle: sum_{n=1..N} lambda^n F_{4n}(x,a) from the joint
// DP; the coefficients are probabilities, so the tail is geometric.
inline PartialSum dp_partial_sum(double p, double lam, int x, int a, int N = 60) {
  if (!(lam > 0.0 && lam < 1.0)) throw validation_error("need 0 < lambda < 1");
  if (x < 0 || a < x) throw validation_error("need 0 <= x <= a");
  JointTable<double> t = JointTable<double>::origin(2);
  double value = 0, lam_pow = 1;
  for (long n = 1; n <= N; ++n) {
    for (long i = 4 * (n - 1) + 1; i <= 4 * n; ++i) t = dp_step(t, phase_of(i, 2), p);
    lam_pow *= lam;
    value += lam_pow * t.value(x, a);
  }
  return {value, lam_pow * lam / (1 - lam)};
}

struct CascadeResult {
  double p, lam;
  int a_max;
  std::map<std::pair<int, int>, double> g;  // solvable entries only
  std::map<int, double> cond;               // condition number per level a
};

// Evaluates the functional equation at the quartic's zeros to knock out the
// unknown boundary series, level by level: a=1 is a 2x2 solve in
// (G(0,1),G(1,1)), a=2 a 3x3 in (G(0,2),G(1,2),G(2,2)), and each a>=3 a 4x4
// in (G(0,a),G(1,a),G(a-1,a),G(a,a)).  Middle entries (2,a>=4), ... stay
// undetermined: four zeros cannot pin more than four unknowns per level.
inline CascadeResult appendix_cascade(double p, double lam, int a_max,
                                      double cond_limit = 1e12) {
  if (a_max < 1) throw validation_error("a_max must be >= 1");
  const QuarticZeros z = quartic_zeros(p, lam);
  const double q = z.q;
  if (q * q * lam >= 1.0) throw validation_error("need q^2*lambda < 1");

  CascadeResult out;
  out.p = p;
  out.lam = lam;
  out.a_max = a_max;
  out.g[{0, 0}] = q * q * lam / (1 - q * q * lam);

  const auto p2 = p * p, p3 = p * p * p, p4 = p * p * p * p;
  const auto q2 = q * q, q3 = q * q * q, q4 = q * q * q * q;

  for (int a = 1; a <= a_max; ++a) {
    if (a == 1) {
      std::vector<std::vector<double>> A(2, std::vector<double>(2));
      std::vector<double> b(2);
      for (int i = 0; i < 2; ++i) {
        const double mu = z.zeros[i], mu2 = mu * mu, mu3 = mu2 * mu, mu4 = mu2 * mu2;
        const double cons = -(2 * p3 * q * mu + 2 * p * (1 + p) * q2) * mu2;
        const double c00 = -(2 * p3 * q * mu + 4 * p2 * q2 + 2 * p * q3) * mu2;
        const double c01 = p4 * mu4 + 2 * p3 * q * mu3 + p2 * q2 * mu2 -
                           (1 + 3 * p) * q3 * mu2 + 4 * p * q3 * mu + q4;
        const double c11 = (p4 * mu4 + 2 * p3 * q * mu3 + 2 * p3 * q * mu3 +
                            5 * p2 * q2 * mu2 + 2 * p * q3 * mu - q4 * mu + q4) *
                           mu;
        A[i] = {c01, c11};
        b[i] = -(cons + c00 * out.g[{0, 0}]);
      }
      const Solved<double> s = solve_dense(A, b, cond_limit);
      out.cond[a] = s.cond;
      out.g[{0, 1}] = s.x[0];
      out.g[{1, 1}] = s.x[1];
    } else if (a == 2) {
      std::vector<std::vector<double>> A(3, std::vector<double>(3));
      std::vector<double> b(3);
      for (int i = 0; i < 3; ++i) {
        const double mu = z.zeros[i], mu2 = mu * mu, mu3 = mu2 * mu, mu4 = mu2 * mu2;
        const double k1 = (p4 * mu2 + 2 * p3 * q * mu + p2 * q2) * mu2;
        const double c11 = -(2 * p3 * q * mu2 + 4 * p2 * q2 * mu + 2 * p * q3) * mu2;
        const double c12 =
            (p4 * mu4 + 2 * p3 * q * mu3 + p2 * q2 * mu2 - q4 * mu + q4) * mu;
        const double c22 =
            (p4 * mu3 + 4 * p3 * q * mu2 + 5 * p2 * q2 * mu + 2 * p * q3) * mu3;
        const double c02 = -((1 + 3 * p) * q3 * mu2 - 4 * p * q3 * mu - q4);
        A[i] = {c02, c12, c22};
        b[i] = -(-k1 + (-k1) * out.g[{0, 0}] + (-k1) * out.g[{0, 1}] +
                 c11 * out.g[{1, 1}]);
      }
      const Solved<double> s = solve_dense(A, b, cond_limit);
      out.cond[a] = s.cond;
      out.g[{0, 2}] = s.x[0];
      out.g[{1, 2}] = s.x[1];
      out.g[{2, 2}] = s.x[2];
    } else {
      std::vector<std::vector<double>> A(4, std::vector<double>(4));
      std::vector<double> b(4);
      for (int i = 0; i < 4; ++i) {
        const double mu = z.zeros[i], mu2 = mu * mu, mu3 = mu2 * mu;
        const double mu_a = std::pow(mu, a);
        const double kq = p4 * mu2 + 2 * p3 * q * mu + p2 * q2;
        const double cm2m2 = -kq * mu_a;
        const double cm2m1 = -kq * mu_a;
        const double cm1m1 =
            -(2 * p3 * q * mu2 + 4 * p2 * q2 * mu + 2 * p * q3) * mu_a;
        const double cm1a = kq * mu_a * mu;
        const double caa =
            (p4 * mu3 + 4 * p3 * q * mu2 + 5 * p2 * q2 * mu + 2 * p * q3) * mu_a * mu;
        const double c0a = -((1 + 3 * p) * q3 * mu2 - 4 * p * q3 * mu - q4);
        const double c1a = -q4 * (mu - 1) * mu;
        A[i] = {c0a, c1a, cm1a, caa};
        b[i] = -(cm2m2 * out.g[{a - 2, a - 2}] + cm2m1 * out.g[{a - 2, a - 1}] +
                 cm1m1 * out.g[{a - 1, a - 1}]);
      }
      const Solved<double> s = solve_dense(A, b, cond_limit);
      out.cond[a] = s.cond;
      out.g[{0, a}] = s.x[0];
      out.g[{1, a}] = s.x[1];
      out.g[{a - 1, a}] = s.x[2];
      out.g[{a, a}] = s.x[3];
    }
  }
  return out;
}

}  // namespace qmax::ell2
