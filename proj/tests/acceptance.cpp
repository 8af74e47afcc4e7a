// Acceptance gate: one pass/fail line per criterion, exit code = #failures.
// Budgets are wall-clock seconds where a criterion carries one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmax/qmax.hpp"
#include "support/oracle.hpp"

using namespace qmax;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr std::uint64_t kMcSeed = 20250822;

std::string run_cli_stdout(const std::string& args) {
  const std::string cmd = std::string(QMAX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  if (pclose(pipe) == -1) return "<pclose failed>";
  return out;
}

std::map<std::pair<long, long>, Rat> table_as_map(const JointTable<Rat>& t) {
  std::map<std::pair<long, long>, Rat> m;
  for (long a = 0; a <= t.amax(); ++a)
    for (long x = 0; x <= a; ++x)
      if (t.f[a][x] != 0) m[{x, a}] = t.f[a][x];
  return m;
}

Outcome c1_brute_force() {
  for (int ell : {1, 2, 3})
    for (Rat p : {Rat(1, 3), Rat(1, 2)})
      for (int n = 1; n <= 12; ++n) {
        const auto brute = testing::brute_joint(p, ell, n);
        const auto dp = table_as_map(joint_dist<Rat>(p, ell, n));
        if (brute != dp) {
          std::ostringstream os;
          os << "mismatch at ell=" << ell << " p=" << rat_str(p) << " n=" << n;
          return {false, os.str()};
        }
      }
  return {};
}

Outcome c2_gf_vs_dp() {
  for (Rat p : {Rat(1, 3), Rat(2, 5), Rat(1, 2)}) {
    // one DP stream per p; snapshot P{M_2m = a} for every level
    std::vector<std::vector<Rat>> ref(26, std::vector<Rat>(6, Rat(0)));
    JointTable<Rat> t = JointTable<Rat>::origin(1);
    for (int m = 1; m <= 25; ++m) {
      t = dp_step(t, phase_of(2 * m - 1, 1), p);
      t = dp_step(t, phase_of(2 * m, 1), p);
      for (int a = 1; a <= 5; ++a)
        if (a <= t.amax())
          for (long x = 0; x <= a; ++x) ref[m][a] += t.f[a][x];
    }
    for (int a = 1; a <= 5; ++a) {
      // throws if the bracket and relation routes ever disagree
      const Series<Rat> gf = max_gf_coeffs(p, a, 25);
      for (int m = 1; m <= 25; ++m)
        if (gf.at(m) != ref[m][a]) {
          std::ostringstream os;
          os << "coefficient " << m << " differs at p=" << rat_str(p) << " a=" << a;
          return {false, os.str()};
        }
      if (a == 1) {
        if (!(gf == a1_closed_series(p, 25)))
          return {false, "a=1 closed form differs at p=" + rat_str(p)};
        if (gf.at(1) != p) return {false, "c_1 != p at p=" + rat_str(p)};
        if (p == Rat(1, 3) && gf.at(2) != testing::canon(14, 27))
          return {false, "c_2 != 14/27 at p=1/3"};
      }
    }
  }
  return {};
}

Outcome c3_mean_series() {
  const Series<Rat> gf = em2n_gf(25);
  const Rat half(1, 2);
  JointTable<Rat> t = JointTable<Rat>::origin(1);
  for (int m = 1; m <= 25; ++m) {
    t = dp_step(t, phase_of(2 * m - 1, 1), half);
    t = dp_step(t, phase_of(2 * m, 1), half);
    if (gf.at(m) != moment(t.max_marginal(), 1)) {
      std::ostringstream os;
      os << "E(M_" << 2 * m << ") differs from the DP mean";
      return {false, os.str()};
    }
  }
  if (gf.at(1) != half) return {false, "E(M_2) != 1/2"};
  if (gf.at(2) != testing::canon(7, 8)) return {false, "E(M_4) != 7/8"};
  return {};
}

Outcome c4_theta_identity() {
  for (Rat p : {Rat(1, 3), Rat(1, 2)}) {
    const Series<Rat> composed = lambda_of_theta(p, 30);
    if (!(composed == Series<Rat>::monomial(Rat(1), 1, 30)))
      return {false, "composition is not the identity at p=" + rat_str(p)};
  }
  return {};
}

Outcome c5_ell2_closed_forms() {
  const std::vector<std::pair<double, double>> grid = {
      {0.3, 0.25}, {0.5, 0.5}, {0.4, 0.1}};
  const std::vector<std::pair<int, int>> targets = {{0, 1}, {1, 1}, {0, 2}};
  for (const auto& [p, lam] : grid) {
    const ell2::CascadeResult casc = ell2::appendix_cascade(p, lam, 3);
    for (const auto& [x, a] : targets) {
      const double cf = ell2::closed_form_g(p, lam, x, a);
      const ell2::PartialSum ps = ell2::dp_partial_sum(p, lam, x, a, 60);
      if (std::abs(cf - ps.value) > ps.tail_bound + 1e-8) {
        std::ostringstream os;
        os << "closed vs dp off at p=" << p << " lam=" << lam << " (" << x << "," << a
           << "): diff=" << std::abs(cf - ps.value);
        return {false, os.str()};
      }
      const double rel = std::abs(casc.g.at({x, a}) - cf) / std::abs(cf);
      if (rel > 1e-8) {
        std::ostringstream os;
        os << "closed vs cascade rel=" << rel << " at p=" << p << " lam=" << lam << " ("
           << x << "," << a << ")";
        return {false, os.str()};
      }
    }
  }
  return {};
}

Outcome c6_stationary() {
  for (double p : {1.0 / 3.0, 0.4}) {
    const StationaryModel m = stationary_model(p, 1);
    const std::vector<double> pmf = stationary_pmf(m, 30);
    const double q = 1 - p;
    double sup = 0;
    for (int x = 0; x <= 30; ++x) {
      const double geo = (q - p) * std::pow(p, 2 * x) / std::pow(q, 2 * x + 2);
      sup = std::max(sup, std::abs(pmf[x] - geo));
    }
    if (sup >= 1e-10) {
      std::ostringstream os;
      os << "ell=1 geometric sup error " << sup << " at p=" << p;
      return {false, os.str()};
    }
  }

  const StationaryModel m2 = stationary_model(1.0 / 3.0, 2);
  const std::vector<double> pmf2 = stationary_pmf(m2, 1);
  if (std::abs(pmf2[0] - 0.80912654279503071) > 1e-10 ||
      std::abs(pmf2[1] - 0.13849382881986733) > 1e-10)
    return {false, "ell=2 head probabilities off"};

  const StationaryMoments mo1 = stationary_moments(stationary_model(1.0 / 3.0, 1));
  const StationaryMoments mo1b = stationary_moments(stationary_model(0.4, 1));
  const StationaryMoments mo2 = stationary_moments(m2);
  if (std::abs(mo1.mean - 1.0 / 3.0) > 1e-9) return {false, "ell=1 mean != 1/3"};
  if (std::abs(mo1b.mean - 0.8) > 1e-9) return {false, "ell=1 mean != 4/5 at p=2/5"};
  if (std::abs(mo2.mean - 0.26025880213480501) > 1e-9) return {false, "ell=2 mean off"};
  if (std::abs(mo1.second_factorial - 2.0 / 9.0) > 1e-9)
    return {false, "ell=1 second factorial moment != 2/9"};

  for (int ell : {1, 2}) {
    const double tv = tv_distance_to_dp(stationary_model(1.0 / 3.0, ell), 4000);
    if (tv >= 1e-4) {
      std::ostringstream os;
      os << "TV to DP at n=4000 is " << tv << " for ell=" << ell;
      return {false, os.str()};
    }
  }
  return {};
}

Outcome c7_limit_constants() {
  const LimitReport rep =
      convergence_report(Rat(1, 2), 1, {200, 20000}, LimitMethod::mc, 100000, kMcSeed);
  const LimitRow& small = rep.rows[0];
  const LimitRow& large = rep.rows[1];
  const double d1_small = std::abs(small.estimate_first - rep.reference_first);
  const double d1_large = std::abs(large.estimate_first - rep.reference_first);
  const double d2_small = std::abs(small.estimate_second - rep.reference_second);
  const double d2_large = std::abs(large.estimate_second - rep.reference_second);
  std::ostringstream os;
  os << "rel dev first=" << d1_large / rep.reference_first
     << " second=" << d2_large / rep.reference_second;
  Outcome oc;
  oc.detail = os.str();
  oc.pass = d1_large / rep.reference_first < 0.05 &&
            d2_large / rep.reference_second < 0.07 && d1_large < d1_small &&
            d2_large < d2_small;
  return oc;
}

Outcome c8_universality() {
  const UniversalityReport rep =
      universality_experiment(Rat(1, 2), {1, 2}, 20000, 100000, kMcSeed);
  const UniversalityRow& r1 = rep.rows[0];
  const UniversalityRow& r2 = rep.rows[1];
  const double rel = std::abs(r2.scaled_mean - r1.scaled_mean) / r1.scaled_mean;
  std::ostringstream os;
  os << "rel diff=" << rel << " z=" << r2.z_mean_vs_ell1;
  Outcome oc;
  oc.detail = os.str();
  oc.pass = rel < 0.02 && std::abs(r2.z_mean_vs_ell1) <= 3.0 &&
            rep.label.find("conjecture") != std::string::npos;
  return oc;
}

Outcome c9_reproducibility() {
  SimConfig cfg;
  cfg.params = validate_params(Rat(1, 2), 2, Mode::floating);
  cfg.n = 512;
  cfg.reps = 4001;
  cfg.seed = 123;
  const SimResult a = estimate_moments(cfg);
  const SimResult b = estimate_moments(cfg);
  if (a.mean_max != b.mean_max || a.mean_max_sq != b.mean_max_sq ||
      a.variance != b.variance || a.stderr_mean != b.stderr_mean)
    return {false, "repeated estimate_moments differ"};
  const SimResult split = estimate_moments_split(cfg, 5);
  if (split.mean_max != a.mean_max || split.mean_max_sq != a.mean_max_sq ||
      split.variance != a.variance || split.stderr_mean != a.stderr_mean)
    return {false, "split run differs from sequential"};

  const std::string sim_args = "simulate --p 1/2 --n 1000 --reps 5000 --seed 77";
  const std::string s1 = run_cli_stdout(sim_args);
  if (s1.empty() || s1 != run_cli_stdout(sim_args))
    return {false, "simulate stdout not byte-identical"};
  const std::string uni_args = "universality --p 1/2 --n 500 --reps 1000 --seed 5";
  const std::string u1 = run_cli_stdout(uni_args);
  if (u1.empty() || u1 != run_cli_stdout(uni_args))
    return {false, "universality stdout not byte-identical"};
  return {};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    double budget_s;  // 0 = no per-criterion budget
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"exact joint law equals exhaustive path enumeration", 60, c1_brute_force},
      {"max-law generating function matches DP coefficients", 120, c2_gf_vs_dp},
      {"E(M_2n) series matches DP means", 0, c3_mean_series},
      {"theta composes to the identity series", 0, c4_theta_identity},
      {"ell=2 closed forms agree with cascade and partial sums", 60,
       c5_ell2_closed_forms},
      {"stationary solver reproduces known laws and DP tail", 0, c6_stationary},
      {"scaled maxima approach the limit constants", 600, c7_limit_constants},
      {"universality probe: ell=2 consistent with ell=1", 0, c8_universality},
      {"seeded runs reproduce byte-for-byte and merge exactly", 0, c9_reproducibility},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
      oc = criteria[i].fn();
    } catch (const std::exception& e) {
      oc.pass = false;
      oc.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].budget_s > 0 && secs > criteria[i].budget_s) {
      oc.pass = false;
      oc.detail += (oc.detail.empty() ? "" : "; ") + std::string("over budget");
    }
    if (!oc.pass) ++failures;
    std::printf("%s criterion %zu: %s [%.1f s]%s%s\n", oc.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].title, secs, oc.detail.empty() ? "" : " -- ",
                oc.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
