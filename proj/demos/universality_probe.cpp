// Monte Carlo probe of the scaling conjecture: E(M_n)/sqrt(n) compared
// across cycle lengths at p=1/2.  Consistency evidence, not a proof.

#include <cstdio>

#include "qmax/qmax.hpp"

using namespace qmax;

int main() {
  const long n = 4000;
  const long reps = 20000;
  const UniversalityReport rep =
      universality_experiment(Rat(1, 2), {1, 2, 3}, n, reps, 2026);

  std::printf("%s\n", rep.label.c_str());
  std::printf("p=1/2  n=%ld  reps=%ld  seed=%llu\n\n", n, reps,
              static_cast<unsigned long long>(rep.seed));
  std::printf("%4s  %14s  %10s  %14s  %10s\n", "ell", "E(M)/sqrt(n)", "stderr",
              "E(M^2)/n", "z vs ell=1");
  for (const UniversalityRow& r : rep.rows)
    std::printf("%4d  %14.6f  %10.6f  %14.6f  %10.2f\n", r.ell, r.scaled_mean,
                r.scaled_stderr_mean, r.scaled_mean_sq, r.z_mean_vs_ell1);

  const LimitConstants lim = limit_constants();
  std::printf("\nconjectured limits: E(M)/sqrt(n) -> %.6f, E(M^2)/n -> %.6f\n",
              lim.first, lim.second);
  return 0;
}
