#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmax/params.hpp"
#include "qmax/rng.hpp"

namespace qmax {

struct SimConfig {
  Params params;
  long n = 1;
  long reps = 1;
  std::uint64_t seed = 0;
  // Offset added to the replica index before stream derivation; lets
  // independent experiments (e.g. different ell) draw from disjoint blocks.
  std::uint64_t stream_base = 0;
};

struct SimResult {
  double mean_max = 0;
  double mean_max_sq = 0;
  double variance = 0;     // sample variance of M_n
  double stderr_mean = 0;  // sd(M_n)/sqrt(reps)
  double stderr_sq = 0;    // sd(M_n^2)/sqrt(reps)
  long reps = 0;
  std::uint64_t seed = 0;
  double elapsed = 0;  // wall seconds; informational only, not part of the value
};

// One path of the reflected walk; returns (S_n, M_n).  A single uniform per
// step: arrivals add a car when u < p, departures remove one when u >= p
// (probability q), reflecting at zero.  p is converted to double once by the
// caller via Params; the <2^-52 rounding bias is accepted.
template <class Rng>
std::pair<long, long> simulate_path(const Params& params, long n, Rng& rng) {
  const double p = params.p_d();
  long s = 0, m = 0;
  for (long i = 1; i <= n; ++i) {
    const double u = rng.uniform01();
    if (phase_of(i, params.ell) == Phase::arrival) {
      if (u < p) {
        ++s;
        if (s > m) m = s;
      }
    } else {
      if (u >= p && s > 0) --s;
    }
  }
  return {s, m};
}

namespace detail {

// Integer moment accumulators.  Sums of M, M^2, M^4 over replicas are exact
// integers, so merging partial sums is associative and order-independent --
// the split/merge contract below holds bit-for-bit.
struct MomentSums {
  std::int64_t sum_m = 0;
  std::int64_t sum_m2 = 0;
  unsigned __int128 sum_m4 = 0;

  void add(long m) {
    const std::int64_t m2 = static_cast<std::int64_t>(m) * m;
    sum_m += m;
    sum_m2 += m2;
    sum_m4 += static_cast<unsigned __int128>(m2) * static_cast<unsigned __int128>(m2);
  }
  void merge(const MomentSums& o) {
    sum_m += o.sum_m;
    sum_m2 += o.sum_m2;
    sum_m4 += o.sum_m4;
  }
};

inline MomentSums accumulate_range(const SimConfig& cfg, long first_rep, long last_rep) {
  MomentSums acc;
  for (long r = first_rep; r < last_rep; ++r) {
    Xoshiro256pp rng = replica_stream(cfg.seed, cfg.stream_base + static_cast<std::uint64_t>(r));
    acc.add(simulate_path(cfg.params, cfg.n, rng).second);
  }
  return acc;
}

inline SimResult finalize(const SimConfig& cfg, const MomentSums& acc, double elapsed) {
  const double reps = static_cast<double>(cfg.reps);
  SimResult out;
  out.reps = cfg.reps;
  out.seed = cfg.seed;
  out.elapsed = elapsed;
  const double sm = static_cast<double>(acc.sum_m);
  const double sm2 = static_cast<double>(acc.sum_m2);
  const double sm4 = static_cast<double>(acc.sum_m4);
  out.mean_max = sm / reps;
  out.mean_max_sq = sm2 / reps;
  if (cfg.reps > 1) {
    const double var_m = (sm2 - sm * sm / reps) / (reps - 1);
    const double var_m2 = (sm4 - sm2 * sm2 / reps) / (reps - 1);
    out.variance = var_m;
    out.stderr_mean = std::sqrt(std::max(var_m, 0.0) / reps);
    out.stderr_sq = std::sqrt(std::max(var_m2, 0.0) / reps);
  }
  return out;
}

}  // namespace detail

inline void validate_sim_config(const SimConfig& cfg) {
  if (cfg.n < 1) throw validation_error("simulation needs n >= 1");
  if (cfg.reps < 1) throw validation_error("simulation needs reps >= 1");
}

inline SimResult estimate_moments(const SimConfig& cfg) {
  validate_sim_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const detail::MomentSums acc = detail::accumulate_range(cfg, 0, cfg.reps);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return detail::finalize(cfg, acc, dt);
}

// Same estimate computed as `parts` independent chunks merged afterwards;
// exists to demonstrate (and test) that the replica-stream derivation makes
// the merged result identical to the sequential one.
inline SimResult estimate_moments_split(const SimConfig& cfg, int parts) {
  validate_sim_config(cfg);
  if (parts < 1) throw validation_error("parts must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<detail::MomentSums> chunks(parts);
  const long per = cfg.reps / parts;
  // walk the chunks in reverse to exercise order independence
  for (int c = parts - 1; c >= 0; --c) {
    const long lo = per * c;
    const long hi = (c == parts - 1) ? cfg.reps : per * (c + 1);
    chunks[c] = detail::accumulate_range(cfg, lo, hi);
  }
  detail::MomentSums acc;
  for (const auto& ch : chunks) acc.merge(ch);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return detail::finalize(cfg, acc, dt);
}

struct UniversalityRow {
  int ell = 1;
  SimResult sim;
  double scaled_mean = 0;       // E(M_n)/sqrt(n)
  double scaled_mean_sq = 0;    // E(M_n^2)/n
  double scaled_stderr_mean = 0;
  double scaled_stderr_sq = 0;
  double z_mean_vs_ell1 = 0;  // (row - ell=1 row) / combined stderr
  double z_sq_vs_ell1 = 0;
};

struct UniversalityReport {
  double p = 0;
  long n = 0;
  long reps = 0;
  std::uint64_t seed = 0;
  std::vector<UniversalityRow> rows;
  std::string label;
};

// Cross-cycle comparison of the scaled maximum moments.  This probes a
// conjecture (agreement across cycle lengths); z-scores quantify consistency,
// they do not prove the limits coincide.
inline UniversalityReport universality_experiment(const Rat& p, const std::vector<int>& ells,
                                                  long n, long reps, std::uint64_t seed) {
  if (ells.empty()) throw validation_error("universality needs at least one ell");
  UniversalityReport rep;
  rep.p = to_double(p);
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.label =
      "conjecture probe: checks consistency of scaled maxima across cycle "
      "lengths; not a proof";
  const double sqn = std::sqrt(static_cast<double>(n));
  for (int ell : ells) {
    SimConfig cfg;
    cfg.params = Params{p, Rat(1) - p, ell, Mode::floating};
    validate_params(cfg.params.p, ell, Mode::floating);
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    // disjoint replica blocks per ell
    cfg.stream_base = static_cast<std::uint64_t>(ell) << 40;
    UniversalityRow row;
    row.ell = ell;
    row.sim = estimate_moments(cfg);
    row.scaled_mean = row.sim.mean_max / sqn;
    row.scaled_mean_sq = row.sim.mean_max_sq / static_cast<double>(n);
    row.scaled_stderr_mean = row.sim.stderr_mean / sqn;
    row.scaled_stderr_sq = row.sim.stderr_sq / static_cast<double>(n);
    rep.rows.push_back(row);
  }
  // z-scores against the first ell=1 row when present, else against rows[0]
  const UniversalityRow* base = &rep.rows.front();
  for (const auto& r : rep.rows)
    if (r.ell == 1) {
      base = &r;
      break;
    }
  for (auto& r : rep.rows) {
    const double se_m = std::hypot(r.scaled_stderr_mean, base->scaled_stderr_mean);
    const double se_s = std::hypot(r.scaled_stderr_sq, base->scaled_stderr_sq);
    r.z_mean_vs_ell1 = se_m > 0 ? (r.scaled_mean - base->scaled_mean) / se_m : 0.0;
    r.z_sq_vs_ell1 = se_s > 0 ? (r.scaled_mean_sq - base->scaled_mean_sq) / se_s : 0.0;
  }
  return rep;
}

}  // namespace qmax
