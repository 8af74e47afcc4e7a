// Small exact session: the law of M_10 at p=1/3, its mean, and the head of
// the ell=2 stationary distribution.

#include <cstdio>

#include "qmax/qmax.hpp"

using namespace qmax;

int main() {
  const Rat p(1, 3);
  const int n = 10;

  const std::vector<Rat> law = max_dist<Rat>(p, 1, n);
  std::printf("law of M_%d at p=%s (ell=1):\n", n, rat_str(p).c_str());
  for (size_t a = 0; a < law.size(); ++a)
    std::printf("  P{M=%zu} = %s\n", a, rat_str(law[a]).c_str());

  Rat mean(0);
  for (size_t a = 1; a < law.size(); ++a) mean += Rat(static_cast<long>(a)) * law[a];
  std::printf("E(M_%d) = %s = %.15f\n", n, rat_str(mean).c_str(), to_double(mean));

  const StationaryModel m = stationary_model(to_double(p), 2);
  const std::vector<double> pmf = stationary_pmf(m, 5);
  std::printf("\nstationary law, ell=2, p=1/3 (first entries):\n");
  for (size_t x = 0; x < pmf.size(); ++x)
    std::printf("  pi_%zu = %.12f\n", x, pmf[x]);
  const StationaryMoments mo = stationary_moments(m);
  std::printf("mean queue length = %.12f\n", mo.mean);
  return 0;
}
