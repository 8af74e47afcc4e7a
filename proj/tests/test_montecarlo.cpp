#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qmax/montecarlo.hpp"
#include "qmax/walk.hpp"

using namespace qmax;

namespace {

struct ScriptedRng {
  std::vector<double> u;
  size_t i = 0;
  double uniform01() { return u[i++]; }
};

Params half_params(int ell) { return validate_params(Rat(1, 2), ell, Mode::floating); }

}  // namespace

TEST_CASE("scripted paths") {
  // every draw on the q side: nothing ever arrives
  ScriptedRng none{{0.9, 0.9, 0.9, 0.9}};
  CHECK(simulate_path(half_params(1), 4, none) == std::pair<long, long>{0, 0});

  // arrive, hold, arrive, hold: the unique p^4 path to (2,2)
  ScriptedRng updown{{0.1, 0.1, 0.1, 0.1}};
  CHECK(simulate_path(half_params(1), 4, updown) == std::pair<long, long>{2, 2});

  // arrive, depart, arrive, depart ends at the origin with max 1
  ScriptedRng seesaw{{0.1, 0.9, 0.1, 0.9}};
  CHECK(simulate_path(half_params(1), 4, seesaw) == std::pair<long, long>{0, 1});

  // ell=2: two arrivals then two departures
  ScriptedRng cycle{{0.1, 0.1, 0.9, 0.9}};
  CHECK(simulate_path(half_params(2), 4, cycle) == std::pair<long, long>{0, 2});
}

TEST_CASE("threshold convention at the draw boundary") {
  // u == p belongs to the q side on arrivals and to the departing side too
  ScriptedRng edge{{0.5, 0.5}};
  CHECK(simulate_path(half_params(1), 2, edge) == std::pair<long, long>{0, 0});
}

TEST_CASE("replica streams are disjoint and stable") {
  Xoshiro256pp a = replica_stream(123, 0);
  Xoshiro256pp b = replica_stream(123, 1);
  Xoshiro256pp a2 = replica_stream(123, 0);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t va = a.next(), vb = b.next();
    all_equal = all_equal && (va == vb);
    CHECK(va == a2.next());
  }
  CHECK_FALSE(all_equal);

  for (Xoshiro256pp g = replica_stream(9, 4); int k : {1, 2, 3}) {
    (void)k;
    const double u = g.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("instrumented run: reflection and maximum bookkeeping") {
  const Params pr = half_params(2);
  const long n = 1000;
  Xoshiro256pp rng = replica_stream(42, 0);
  Xoshiro256pp shadow = replica_stream(42, 0);
  const auto [fin, mx] = simulate_path(pr, n, rng);
  // replay the same stream step by step
  long s = 0, m = 0;
  const double p = pr.p_d();
  for (long i = 1; i <= n; ++i) {
    const double u = shadow.uniform01();
    if (phase_of(i, pr.ell) == Phase::arrival) {
      if (u < p) ++s;
    } else if (u >= p && s > 0) {
      --s;
    }
    REQUIRE(s >= 0);
    REQUIRE(s <= arrival_count(i, pr.ell));
    m = std::max(m, s);
  }
  CHECK(fin == s);
  CHECK(mx == m);
}

TEST_CASE("estimate_moments: deterministic and internally consistent") {
  SimConfig cfg;
  cfg.params = half_params(1);
  cfg.n = 64;
  cfg.reps = 500;
  cfg.seed = 777;
  const SimResult r1 = estimate_moments(cfg);
  const SimResult r2 = estimate_moments(cfg);
  CHECK(r1.mean_max == r2.mean_max);
  CHECK(r1.mean_max_sq == r2.mean_max_sq);
  CHECK(r1.variance == r2.variance);
  CHECK(r1.stderr_mean == r2.stderr_mean);
  CHECK(r1.stderr_sq == r2.stderr_sq);

  // moments recomputed directly from the replica streams
  double sm = 0, sm2 = 0;
  for (long rep = 0; rep < cfg.reps; ++rep) {
    Xoshiro256pp g = replica_stream(cfg.seed, rep);
    const long m = simulate_path(cfg.params, cfg.n, g).second;
    sm += m;
    sm2 += static_cast<double>(m) * m;
  }
  CHECK(r1.mean_max == sm / cfg.reps);
  CHECK(r1.mean_max_sq == sm2 / cfg.reps);
  CHECK(r1.stderr_mean ==
        std::sqrt((sm2 - sm * sm / cfg.reps) / (cfg.reps - 1) / cfg.reps));
  CHECK(r1.reps == cfg.reps);
  CHECK(r1.seed == cfg.seed);
}

TEST_CASE("split runs merge to the sequential result exactly") {
  SimConfig cfg;
  cfg.params = validate_params(Rat(1, 3), 2, Mode::floating);
  cfg.n = 128;
  cfg.reps = 1001;  // deliberately not divisible
  cfg.seed = 31415;
  const SimResult seq = estimate_moments(cfg);
  for (int parts : {2, 3, 7}) {
    const SimResult par = estimate_moments_split(cfg, parts);
    CHECK(par.mean_max == seq.mean_max);
    CHECK(par.mean_max_sq == seq.mean_max_sq);
    CHECK(par.variance == seq.variance);
    CHECK(par.stderr_mean == seq.stderr_mean);
    CHECK(par.stderr_sq == seq.stderr_sq);
  }
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.params = half_params(1);
  cfg.n = 0;
  cfg.reps = 10;
  CHECK_THROWS_AS(estimate_moments(cfg), validation_error);
  cfg.n = 10;
  cfg.reps = 0;
  CHECK_THROWS_AS(estimate_moments(cfg), validation_error);
  cfg.reps = 10;
  CHECK_THROWS_AS(estimate_moments_split(cfg, 0), validation_error);
}

TEST_CASE("small-n expectations: E(M_2) = p") {
  SimConfig cfg;
  cfg.params = half_params(1);
  cfg.n = 2;
  cfg.reps = 200000;
  cfg.seed = 5;
  const SimResult r = estimate_moments(cfg);
  // binomial stderr ~ 0.0011; allow 4 sigma
  CHECK(std::abs(r.mean_max - 0.5) < 4.5e-3);
}

TEST_CASE("empirical law matches the DP law: per-bin and chi-square") {
  const Rat p(1, 3);
  const int ell = 1;
  const long n = 10;
  const long reps = 1000000;

  std::vector<long> counts(arrival_count(n, ell) + 1, 0);
  SimConfig cfg;
  cfg.params = validate_params(p, ell, Mode::floating);
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = 2024;
  for (long rep = 0; rep < reps; ++rep) {
    Xoshiro256pp g = replica_stream(cfg.seed, rep);
    ++counts[simulate_path(cfg.params, n, g).second];
  }

  const std::vector<Rat> dp = max_dist<Rat>(p, ell, n);
  REQUIRE(dp.size() == counts.size());
  double chi2 = 0;
  for (size_t a = 0; a < dp.size(); ++a) {
    const double prob = to_double(dp[a]);
    const double hat = static_cast<double>(counts[a]) / reps;
    const double bound = 5.0 * std::sqrt(hat * (1 - hat) / reps);
    INFO("bin a=" << a << " hat=" << hat << " dp=" << prob);
    CHECK(std::abs(hat - prob) <= bound);
    const double expect = prob * reps;
    chi2 += (counts[a] - expect) * (counts[a] - expect) / expect;
  }
  // 6 bins, 5 degrees of freedom: critical value at the 0.001 level
  CHECK(chi2 < 20.515);
}

TEST_CASE("universality experiment shape and self-comparison") {
  const UniversalityReport rep =
      universality_experiment(Rat(1, 2), {1, 2}, 400, 4000, 11);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].ell == 1);
  CHECK(rep.rows[1].ell == 2);
  CHECK(rep.label.find("conjecture") != std::string::npos);
  CHECK(rep.rows[0].z_mean_vs_ell1 == 0.0);
  CHECK(rep.rows[0].z_sq_vs_ell1 == 0.0);
  CHECK(std::isfinite(rep.rows[1].z_mean_vs_ell1));
  CHECK(rep.rows[1].scaled_mean > 0);
  CHECK(rep.rows[1].scaled_stderr_mean > 0);

  const UniversalityReport solo = universality_experiment(Rat(1, 3), {3}, 120, 500, 3);
  REQUIRE(solo.rows.size() == 1);
  CHECK(solo.rows[0].z_mean_vs_ell1 == 0.0);

  const UniversalityReport three =
      universality_experiment(Rat(1, 3), {1, 2, 3}, 200, 800, 13);
  CHECK(three.rows.size() == 3);

  CHECK_THROWS_AS(universality_experiment(Rat(1, 2), {}, 10, 10, 1), validation_error);
  CHECK_THROWS_AS(universality_experiment(Rat(2, 3), {1}, 10, 10, 1), validation_error);
}
