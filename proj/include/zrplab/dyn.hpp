#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "zrplab/transfer.hpp"

namespace zrp {

// Seed plus stream index; stream i of a seed is reproducible on its own, so
// ensembles give the same result for any thread count.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
  std::mt19937_64 engine() const;
};

// One hop: gamma leaves `site` for `target` (target == -1: exits the chain).
struct Event {
  std::size_t site = 0;
  long target = 0;
  MultiIndex gamma;
  Rational rate;
};

// All hops out of a configuration on the ring (HKind::r rightwards, HKind::l
// leftwards) or the open chain with right exit (HKind::tilde).  Rates depend
// only on the departure site.  Throws std::domain_error on a negative rate.
std::vector<Event> rate_table(const State& config, const HamiltonianParams& p, HKind kind);

struct GillespieOptions {
  HamiltonianParams p;
  HKind kind = HKind::r;
  double t_max = 1.0;
  std::size_t max_events = 0;  // 0: no limit
  bool record_path = false;
  bool audit = false;  // recompute every site total from scratch after each event
};

struct GillespieResult {
  State final_state;
  double time = 0;
  std::size_t events = 0;
  std::map<State, double> occupation;  // time spent per state
  std::vector<double> jump_times;      // with record_path
  std::vector<State> path;             // state after each jump, with record_path
  // periodic kinds: total content never changed; tilde: it never increased
  bool conserved = true;
  double audit_max_rel = 0;            // worst incremental-vs-fresh total rate mismatch
};

GillespieResult gillespie_run(const State& initial, const GillespieOptions& o, const RngStream& rng);

// Time-weighted occupation fractions pooled over `trajectories` streams
// (seed, 0..trajectories-1) run on up to `threads` threads.
std::map<State, double> gillespie_ensemble(const State& initial, const GillespieOptions& o, std::uint64_t seed,
                                           std::size_t trajectories, unsigned threads);

struct MixedRun {
  std::vector<State> states;  // initial state then one per sweep
  std::vector<MultiIndex> exited;
  bool monotone = true;       // particle count never increased
};

// Sequential sampler for the open discrete-time chain: per sweep the
// auxiliary line enters empty, site i draws (gamma_i, alpha_i) from the
// Script-S(lambda, mu_i) column of (gamma_{i-1}, beta_i), and gamma_L leaves.
MixedRun mixed_discrete_run(const State& initial, const Rational& lambda, const std::vector<Rational>& mu,
                            const Rational& q, std::size_t steps, const RngStream& rng);

// Total variation distance between an empirical histogram (normalized here)
// and an exact distribution.
double total_variation(const std::map<State, double>& empirical, const std::map<State, Rational>& exact);

}  // namespace zrp
