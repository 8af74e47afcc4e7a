// Command-line surface: every computation as a reproducible, machine-readable
// run.  Data goes to stdout (or --out FILE); the run manifest goes to stderr
// (or FILE.manifest.json), so data bytes depend only on the command line.
// Exit codes: 0 ok, 1 validation error, 2 numeric failure, 64 usage error.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmax/qmax.hpp"

using ojson = nlohmann::ordered_json;
using namespace qmax;

namespace {

constexpr const char* kVersion = "0.1.0";

int g_exit = 0;
std::vector<std::string> g_argv;
std::chrono::steady_clock::time_point g_start;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// stdout (manifest on stderr) or --out FILE (manifest in FILE.manifest.json)
void emit(const std::string& command, const std::string& data,
          const std::string& out_path, std::optional<std::uint64_t> seed) {
  ojson manifest;
  manifest["command"] = command;
  manifest["argv"] = g_argv;
  if (seed)
    manifest["seed"] = *seed;
  else
    manifest["seed"] = nullptr;
  manifest["version"] = kVersion;
  manifest["timestamp_utc"] = utc_now();
  manifest["wall_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - g_start)
          .count();
  char digest[32];
  std::snprintf(digest, sizeof digest, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  manifest["digest"] = digest;

  if (out_path.empty()) {
    std::cout << data << "\n";
    std::cerr << manifest.dump() << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw validation_error("cannot open output file: " + out_path);
    f << data << "\n";
    std::ofstream mf(out_path + ".manifest.json");
    mf << manifest.dump(2) << "\n";
  }
}

std::string num_str(double v) { return ojson(v).dump(); }

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_quote(fields[i]);
  }
  return line;
}

Mode parse_mode(const std::string& m) {
  return m == "exact" ? Mode::exact : Mode::floating;
}

// ---------------------------------------------------------------- maxdist ---

void run_maxdist(const std::string& p_str, int ell, long n, const std::string& mode_str,
                 const std::string& format, const std::string& out) {
  const Rat p = parse_rational(p_str);
  const Mode mode = parse_mode(mode_str);
  validate_params(p, ell, mode);
  if (n < 0) throw validation_error("n must be >= 0");

  std::string data;
  if (mode == Mode::exact) {
    const std::vector<Rat> dist = max_dist<Rat>(p, ell, n);
    if (format == "json") {
      ojson obj = ojson::object();
      for (size_t a = 0; a < dist.size(); ++a) obj[std::to_string(a)] = rat_str(dist[a]);
      data = obj.dump();
    } else {
      std::vector<std::string> lines{"a,probability"};
      for (size_t a = 0; a < dist.size(); ++a)
        lines.push_back(csv_join({std::to_string(a), rat_str(dist[a])}));
      std::ostringstream os;
      for (const auto& l : lines) os << l << "\n";
      data = os.str();
      data.pop_back();
    }
  } else {
    const std::vector<double> dist =
        max_dist<double>(to_double(p), ell, n, default_a_cap(n, ell));
    if (format == "json") {
      ojson obj = ojson::object();
      for (size_t a = 0; a < dist.size(); ++a) obj[std::to_string(a)] = dist[a];
      data = obj.dump();
    } else {
      std::vector<std::string> lines{"a,probability"};
      for (size_t a = 0; a < dist.size(); ++a)
        lines.push_back(csv_join({std::to_string(a), num_str(dist[a])}));
      std::ostringstream os;
      for (const auto& l : lines) os << l << "\n";
      data = os.str();
      data.pop_back();
    }
  }
  emit("maxdist", data, out, std::nullopt);
}

// -------------------------------------------------------------- jointdist ---

void run_jointdist(const std::string& p_str, int ell, long n, const std::string& mode_str,
                   const std::string& format, const std::string& out) {
  const Rat p = parse_rational(p_str);
  const Mode mode = parse_mode(mode_str);
  validate_params(p, ell, mode);
  if (n < 0) throw validation_error("n must be >= 0");

  std::string data;
  auto build = [&](const auto& table, auto to_json_value, auto to_csv_value) {
    if (format == "json") {
      ojson obj = ojson::object();
      for (long a = 0; a <= table.amax(); ++a)
        for (long x = 0; x <= a; ++x) {
          const auto& v = table.f[a][x];
          if (v == 0) continue;
          obj[std::to_string(x) + "," + std::to_string(a)] = to_json_value(v);
        }
      data = obj.dump();
    } else {
      std::vector<std::string> lines{"x,a,probability"};
      for (long a = 0; a <= table.amax(); ++a)
        for (long x = 0; x <= a; ++x) {
          const auto& v = table.f[a][x];
          if (v == 0) continue;
          lines.push_back(
              csv_join({std::to_string(x), std::to_string(a), to_csv_value(v)}));
        }
      std::ostringstream os;
      for (const auto& l : lines) os << l << "\n";
      data = os.str();
      data.pop_back();
    }
  };

  if (mode == Mode::exact) {
    const JointTable<Rat> t = joint_dist<Rat>(p, ell, n);
    build(
        t, [](const Rat& v) { return ojson(rat_str(v)); },
        [](const Rat& v) { return rat_str(v); });
  } else {
    const JointTable<double> t =
        joint_dist<double>(to_double(p), ell, n, default_a_cap(n, ell));
    build(
        t, [](double v) { return ojson(v); }, [](double v) { return num_str(v); });
  }
  emit("jointdist", data, out, std::nullopt);
}

// ---------------------------------------------------------------- gf-check --

void run_gf_check(const std::string& p_str, int a, int terms, const std::string& out) {
  const Rat p = parse_rational(p_str);
  validate_params(p, 1, Mode::exact);
  if (a < 1) throw validation_error("a must be >= 1");
  if (terms < 1) throw validation_error("terms must be >= 1");

  // bracket-vs-relation equality is enforced inside max_gf_coeffs
  const Series<Rat> gf = max_gf_coeffs(p, a, terms);
  if (a == 1 && !(gf == a1_closed_series(p, terms)))
    throw numeric_error("a=1 closed form disagrees with the bracket series");

  JointTable<Rat> t = JointTable<Rat>::origin(1);
  int matched = 0;
  for (int m = 1; m <= terms; ++m) {
    t = dp_step(t, phase_of(2 * m - 1, 1), p);
    t = dp_step(t, phase_of(2 * m, 1), p);
    Rat ref(0);
    if (a <= t.amax())
      for (long x = 0; x <= a; ++x) ref += t.f[a][x];
    if (gf.at(m) == ref) ++matched;
  }

  std::ostringstream os;
  os << (matched == terms ? "PASS" : "FAIL") << ": " << matched << "/" << terms
     << " coefficients match DP";
  if (matched != terms) g_exit = 2;
  emit("gf-check", os.str(), out, std::nullopt);
}

// -------------------------------------------------------------- ell2-verify -

void run_ell2_verify(const std::string& p_str, double lambda, int amax, int terms,
                     const std::string& out) {
  const Rat pr = parse_rational(p_str);
  validate_params(pr, 2, Mode::floating);
  const double p = to_double(pr);
  if (amax < 2) amax = 2;

  const ell2::QuarticZeros z = ell2::quartic_zeros(p, lambda);
  const ell2::CascadeResult casc = ell2::appendix_cascade(p, lambda, amax);

  ojson doc;
  doc["p"] = p;
  doc["lambda"] = lambda;
  doc["theta"] = z.theta;
  doc["omega"] = z.omega;

  const std::vector<std::pair<int, int>> closed = {{0, 1}, {1, 1}, {0, 2}};
  bool pass = true;
  double worst_closed_dp = 0, worst_closed_casc = 0, worst_casc_dp = 0;

  ojson jc = ojson::object(), jdp = ojson::object(), jcas = ojson::object();
  for (const auto& [x, a] : closed) {
    const std::string key = std::to_string(x) + "," + std::to_string(a);
    const double cf = ell2::closed_form_g(p, lambda, x, a);
    const ell2::PartialSum ps = ell2::dp_partial_sum(p, lambda, x, a, terms);
    jc[key] = cf;
    jdp[key] = ojson{{"value", ps.value}, {"tail_bound", ps.tail_bound}};
    const double diff = std::abs(cf - ps.value);
    worst_closed_dp = std::max(worst_closed_dp, diff);
    if (diff > ps.tail_bound + 1e-8) pass = false;
    const double cv = casc.g.at({x, a});
    const double rel = std::abs(cv - cf) / std::max(std::abs(cf), 1e-300);
    worst_closed_casc = std::max(worst_closed_casc, rel);
    if (rel > 1e-8) pass = false;
  }
  for (const auto& [key, cv] : casc.g) {
    const std::string ks = std::to_string(key.first) + "," + std::to_string(key.second);
    jcas[ks] = cv;
    const ell2::PartialSum ps =
        ell2::dp_partial_sum(p, lambda, key.first, key.second, terms);
    const double diff = std::abs(cv - ps.value);
    worst_casc_dp = std::max(worst_casc_dp, diff);
    if (diff > ps.tail_bound + 1e-8) pass = false;
  }
  ojson conds = ojson::object();
  for (const auto& [a, c] : casc.cond) conds[std::to_string(a)] = c;

  doc["closed_forms"] = jc;
  doc["cascade"] = jcas;
  doc["cascade_cond"] = conds;
  doc["dp_partial_sums"] = jdp;
  doc["max_abs_diff_closed_vs_dp"] = worst_closed_dp;
  doc["max_rel_diff_closed_vs_cascade"] = worst_closed_casc;
  doc["max_abs_diff_cascade_vs_dp"] = worst_casc_dp;
  doc["status"] = pass ? "PASS" : "FAIL";
  if (!pass) g_exit = 2;
  emit("ell2-verify", doc.dump(), out, std::nullopt);
}

// -------------------------------------------------------------- stationary --

void run_stationary(const std::string& p_str, int ell, int xmax, const std::string& format,
                    const std::string& out) {
  const Rat p = parse_rational(p_str);
  validate_params(p, ell, Mode::floating);
  if (xmax < 0) throw validation_error("xmax must be >= 0");

  const StationaryModel m = stationary_model(to_double(p), ell);
  const std::vector<double> pmf = stationary_pmf(m, xmax);

  std::string data;
  if (format == "json") {
    data = ojson(pmf).dump();
  } else {
    std::vector<std::string> lines{"x,probability"};
    for (size_t x = 0; x < pmf.size(); ++x)
      lines.push_back(csv_join({std::to_string(x), num_str(pmf[x])}));
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    data = os.str();
    data.pop_back();
  }
  emit("stationary", data, out, std::nullopt);
}

// ------------------------------------------------------------- asymptotics --

void run_asymptotics(const std::string& p_str, int ell, long n, bool have_n,
                     const std::string& method_str, long reps, std::uint64_t seed,
                     const std::string& format, const std::string& out) {
  const Rat p = parse_rational(p_str);
  std::vector<long> n_list = have_n ? std::vector<long>{n} : std::vector<long>{200, 2000, 20000};
  const LimitMethod method = method_str == "dp" ? LimitMethod::dp : LimitMethod::mc;

  const LimitReport rep = convergence_report(p, ell, n_list, method, reps, seed);
  const double g = catalan_constant();

  std::string data;
  if (format == "json") {
    ojson doc;
    doc["constants"] = ojson{{"sqrt_pi_over_8", rep.reference_first},
                             {"catalan", g},
                             {"catalan_half", rep.reference_second}};
    doc["p"] = rep.p;
    doc["ell"] = rep.ell;
    ojson rows = ojson::array();
    for (const LimitRow& r : rep.rows) {
      ojson row;
      row["n"] = r.n;
      row["method"] = r.method == LimitMethod::dp ? "dp" : "mc";
      row["estimate_first"] = r.estimate_first;
      row["delta_first"] = r.estimate_first - rep.reference_first;
      row["estimate_second"] = r.estimate_second;
      row["delta_second"] = r.estimate_second - rep.reference_second;
      if (r.has_stderr) {
        row["stderr_first"] = r.stderr_first;
        row["stderr_second"] = r.stderr_second;
      }
      rows.push_back(row);
    }
    doc["rows"] = rows;
    data = doc.dump();
  } else {
    std::vector<std::string> lines{
        "n,method,estimate_first,stderr_first,delta_first,estimate_second,"
        "stderr_second,delta_second"};
    for (const LimitRow& r : rep.rows)
      lines.push_back(csv_join({std::to_string(r.n),
                                r.method == LimitMethod::dp ? "dp" : "mc",
                                num_str(r.estimate_first),
                                r.has_stderr ? num_str(r.stderr_first) : "",
                                num_str(r.estimate_first - rep.reference_first),
                                num_str(r.estimate_second),
                                r.has_stderr ? num_str(r.stderr_second) : "",
                                num_str(r.estimate_second - rep.reference_second)}));
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    data = os.str();
    data.pop_back();
  }
  emit("asymptotics", data, out, seed);
}

// ---------------------------------------------------------------- simulate --

void run_simulate(const std::string& p_str, int ell, long n, long reps, std::uint64_t seed,
                  const std::string& format, const std::string& out) {
  const Rat p = parse_rational(p_str);
  validate_params(p, ell, Mode::floating);

  SimConfig cfg;
  cfg.params = Params{p, Rat(1) - p, ell, Mode::floating};
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = seed;
  const SimResult r = estimate_moments(cfg);

  std::string data;
  if (format == "json") {
    ojson doc;
    doc["mean_max"] = r.mean_max;
    doc["mean_max_sq"] = r.mean_max_sq;
    doc["variance"] = r.variance;
    doc["stderr_mean"] = r.stderr_mean;
    doc["stderr_sq"] = r.stderr_sq;
    doc["reps"] = r.reps;
    doc["seed"] = r.seed;
    data = doc.dump();
  } else {
    std::vector<std::string> lines{"mean_max,mean_max_sq,variance,stderr_mean,stderr_sq,reps,seed"};
    lines.push_back(csv_join({num_str(r.mean_max), num_str(r.mean_max_sq),
                              num_str(r.variance), num_str(r.stderr_mean),
                              num_str(r.stderr_sq), std::to_string(r.reps),
                              std::to_string(r.seed)}));
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    data = os.str();
    data.pop_back();
  }
  emit("simulate", data, out, seed);
}

// ------------------------------------------------------------- universality -

void run_universality(const std::string& p_str, std::vector<int> ells, long n, long reps,
                      std::uint64_t seed, const std::string& format, const std::string& out) {
  const Rat p = parse_rational(p_str);
  if (ells.empty()) ells = {1, 2};

  const UniversalityReport rep = universality_experiment(p, ells, n, reps, seed);

  std::string data;
  if (format == "json") {
    ojson doc;
    doc["label"] = rep.label;
    doc["p"] = rep.p;
    doc["n"] = rep.n;
    doc["reps"] = rep.reps;
    doc["seed"] = rep.seed;
    ojson rows = ojson::array();
    for (const UniversalityRow& r : rep.rows) {
      ojson row;
      row["ell"] = r.ell;
      row["scaled_mean"] = r.scaled_mean;
      row["scaled_stderr_mean"] = r.scaled_stderr_mean;
      row["scaled_mean_sq"] = r.scaled_mean_sq;
      row["scaled_stderr_sq"] = r.scaled_stderr_sq;
      row["z_mean_vs_ell1"] = r.z_mean_vs_ell1;
      row["z_sq_vs_ell1"] = r.z_sq_vs_ell1;
      rows.push_back(row);
    }
    doc["rows"] = rows;
    data = doc.dump();
  } else {
    std::vector<std::string> lines{
        "ell,scaled_mean,scaled_stderr_mean,scaled_mean_sq,scaled_stderr_sq,"
        "z_mean_vs_ell1,z_sq_vs_ell1"};
    for (const UniversalityRow& r : rep.rows)
      lines.push_back(csv_join({std::to_string(r.ell), num_str(r.scaled_mean),
                                num_str(r.scaled_stderr_mean), num_str(r.scaled_mean_sq),
                                num_str(r.scaled_stderr_sq), num_str(r.z_mean_vs_ell1),
                                num_str(r.z_sq_vs_ell1)}));
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    data = os.str();
    data.pop_back();
  }
  emit("universality", data, out, seed);
}

}  // namespace

int main(int argc, char** argv) {
  g_start = std::chrono::steady_clock::now();
  g_argv.assign(argv, argv + argc);

  CLI::App app{"exact and numeric toolkit for the reflected traffic-light walk"};
  app.require_subcommand(1);

  std::string p_str = "1/2", mode = "exact", format = "json", out, method = "mc";
  int ell = 1, a = 1, terms = 25, amax = 5, xmax = 10;
  long n = 0, reps = 10000;
  double lambda = 0.25;
  std::uint64_t seed = 1;

  const std::string p_help = "arrival probability, rational a/b or decimal";

  auto* c_max = app.add_subcommand("maxdist", "distribution of the running maximum M_n");
  c_max->add_option("--p", p_str, p_help)->required();
  c_max->add_option("--ell", ell, "cycle half-length (ell reds, ell greens)");
  c_max->add_option("--n", n, "number of steps")->required();
  c_max->add_option("--mode", mode)->check(CLI::IsMember({"exact", "float"}));
  c_max->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_max->add_option("--out", out, "write data here, manifest to <out>.manifest.json");
  c_max->callback([&] { run_maxdist(p_str, ell, n, mode, format, out); });

  auto* c_joint = app.add_subcommand("jointdist", "joint law of (S_n, M_n)");
  c_joint->add_option("--p", p_str, p_help)->required();
  c_joint->add_option("--ell", ell);
  c_joint->add_option("--n", n)->required();
  c_joint->add_option("--mode", mode)->check(CLI::IsMember({"exact", "float"}));
  c_joint->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_joint->add_option("--out", out);
  c_joint->callback([&] { run_jointdist(p_str, ell, n, mode, format, out); });

  auto* c_gf = app.add_subcommand(
      "gf-check", "ell=1: generating-function coefficients vs dynamic programming");
  c_gf->add_option("--p", p_str, p_help)->required();
  c_gf->add_option("--a", a, "maximum level a >= 1");
  c_gf->add_option("--terms", terms, "number of lambda coefficients to compare");
  c_gf->add_option("--out", out);
  c_gf->callback([&] { run_gf_check(p_str, a, terms, out); });

  auto* c_e2 = app.add_subcommand("ell2-verify",
                                  "ell=2 closed forms and appendix cascade report");
  c_e2->add_option("--p", p_str, p_help)->required();
  c_e2->add_option("--lambda", lambda, "evaluation point, 0 < lambda < 1")->required();
  c_e2->add_option("--amax", amax, "cascade depth (>= 2)");
  c_e2->add_option("--terms", terms, "partial-sum length for the DP reference");
  c_e2->add_option("--out", out);
  c_e2->callback([&] {
    run_ell2_verify(p_str, lambda, amax, c_e2->count("--terms") ? terms : 60, out);
  });

  auto* c_st = app.add_subcommand("stationary", "limiting queue-length distribution (p < q)");
  c_st->add_option("--p", p_str, p_help)->required();
  c_st->add_option("--ell", ell);
  c_st->add_option("--xmax", xmax, "largest state to report");
  c_st->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_st->add_option("--out", out);
  c_st->callback([&] { run_stationary(p_str, ell, xmax, format, out); });

  auto* c_as = app.add_subcommand("asymptotics",
                                  "limit constants and scaled-moment convergence");
  c_as->add_option("--p", p_str, p_help);
  c_as->add_option("--ell", ell);
  c_as->add_option("--n", n, "single n (default: grid 200, 2000, 20000)");
  c_as->add_option("--method", method)->check(CLI::IsMember({"dp", "mc"}));
  c_as->add_option("--reps", reps, "Monte Carlo replicas per row");
  c_as->add_option("--seed", seed, "64-bit master seed");
  c_as->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_as->add_option("--out", out);
  c_as->callback([&] {
    run_asymptotics(p_str, ell, n, c_as->count("--n") > 0, method, reps, seed, format, out);
  });

  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo moments of M_n");
  c_sim->add_option("--p", p_str, p_help)->required();
  c_sim->add_option("--ell", ell);
  c_sim->add_option("--n", n)->required();
  c_sim->add_option("--reps", reps);
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_sim->add_option("--out", out);
  c_sim->callback([&] { run_simulate(p_str, ell, n, reps, seed, format, out); });

  std::vector<int> ells;
  auto* c_uni = app.add_subcommand("universality",
                                   "scaled maxima across cycle lengths (conjecture probe)");
  c_uni->add_option("--p", p_str, p_help)->required();
  c_uni->add_option("--ell", ells, "cycle lengths to compare (repeatable; default 1 2)");
  c_uni->add_option("--n", n)->required();
  c_uni->add_option("--reps", reps);
  c_uni->add_option("--seed", seed);
  c_uni->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  c_uni->add_option("--out", out);
  c_uni->callback([&] { run_universality(p_str, ells, n, reps, seed, format, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 64;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_exit;
}
