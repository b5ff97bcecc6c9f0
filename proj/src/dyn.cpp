#include "zrplab/dyn.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace zrp {

std::mt19937_64 RngStream::engine() const {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32)};
  return std::mt19937_64(s);
}

namespace {

struct Hop {
  MultiIndex gamma;
  Rational rate;
};

// Outflow of a single site with occupancy a.
std::vector<Hop> site_hops(const MultiIndex& a, const HamiltonianParams& p, HKind kind) {
  std::vector<Hop> hops;
  if (a.is_zero()) return hops;
  std::vector<LocalTerm> terms;
  MultiIndex empty(a.size());
  if (kind == HKind::l) {
    h_local(HKind::l, p)(empty, a, terms);
    for (auto& t : terms)
      if (t.out2 != a) hops.push_back({a - t.out2, t.value});
  } else {
    h_local(HKind::r, p)(a, empty, terms);
    for (auto& t : terms)
      if (t.out1 != a) hops.push_back({a - t.out1, t.value});
  }
  for (auto& h : hops)
    if (h.rate < 0) throw std::domain_error("rate_table: negative rate " + to_string(h.rate) + " for hop " + h.gamma.str() +
                                            " out of " + a.str() + "; parameters are outside the Markov regime");
  return hops;
}

long hop_target(std::size_t i, std::size_t L, HKind kind) {
  switch (kind) {
    case HKind::r:
      return static_cast<long>((i + 1) % L);
    case HKind::l:
      return static_cast<long>((i + L - 1) % L);
    case HKind::tilde:
      return i + 1 < L ? static_cast<long>(i + 1) : -1;
  }
  return -1;
}

void check_config(const State& s, HKind kind) {
  if (s.empty()) throw std::invalid_argument("configuration has no sites");
  if (kind != HKind::tilde && s.size() < 2) throw std::invalid_argument("periodic dynamics need L >= 2");
  for (auto& a : s)
    if (a.size() != s[0].size() || !a.nonnegative()) throw std::invalid_argument("malformed configuration");
}

struct FloatSite {
  std::vector<MultiIndex> gammas;
  std::vector<double> rates;
  double total = 0;
};

// Float rates per occupancy pattern, converted once from the exact values.
class RateCache {
 public:
  RateCache(const HamiltonianParams& p, HKind kind) : p_(p), kind_(kind) {}
  const FloatSite& get(const MultiIndex& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    FloatSite fs;
    for (auto& h : site_hops(a, p_, kind_)) {
      fs.gammas.push_back(h.gamma);
      fs.rates.push_back(to_double(h.rate));
      fs.total += fs.rates.back();
    }
    return cache_.emplace(a, std::move(fs)).first->second;
  }

 private:
  HamiltonianParams p_;
  HKind kind_;
  std::map<MultiIndex, FloatSite> cache_;
};

std::size_t pick(const std::vector<double>& w, double total, std::mt19937_64& eng) {
  double u = std::uniform_real_distribution<double>(0, total)(eng);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  // rounding can leave u just above the last weight
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i] > 0) return i;
  throw std::logic_error("pick: no positive weight");
}

}  // namespace

std::vector<Event> rate_table(const State& config, const HamiltonianParams& p, HKind kind) {
  check_config(config, kind);
  std::vector<Event> ev;
  for (std::size_t i = 0; i < config.size(); ++i)
    for (auto& h : site_hops(config[i], p, kind)) ev.push_back({i, hop_target(i, config.size(), kind), h.gamma, h.rate});
  return ev;
}

GillespieResult gillespie_run(const State& initial, const GillespieOptions& o, const RngStream& rng) {
  check_config(initial, o.kind);
  auto eng = rng.engine();
  RateCache cache(o.p, o.kind);
  std::size_t L = initial.size();
  GillespieResult res;
  State s = initial;
  MultiIndex content = total_content(s);
  std::vector<double> site_total(L);
  double R = 0;
  for (std::size_t i = 0; i < L; ++i) R += site_total[i] = cache.get(s[i]).total;
  double t = 0;
  std::exponential_distribution<double> expo(1.0);
  while (true) {
    if (o.max_events && res.events >= o.max_events) break;
    double dt = R > 0 ? expo(eng) / R : INFINITY;
    if (t + dt >= o.t_max) {
      res.occupation[s] += o.t_max - t;
      t = o.t_max;
      break;
    }
    res.occupation[s] += dt;
    t += dt;
    std::size_t i = pick(site_total, R, eng);
    const FloatSite& fs = cache.get(s[i]);
    MultiIndex g = fs.gammas[pick(fs.rates, fs.total, eng)];
    long tgt = hop_target(i, L, o.kind);
    s[i] -= g;
    if (tgt >= 0) s[static_cast<std::size_t>(tgt)] += g;
    for (std::size_t j : {i, tgt >= 0 ? static_cast<std::size_t>(tgt) : i}) {
      R -= site_total[j];
      site_total[j] = cache.get(s[j]).total;
      R += site_total[j];
    }
    ++res.events;
    if (o.audit) {
      double fresh = 0;
      for (std::size_t j = 0; j < L; ++j) fresh += cache.get(s[j]).total;
      double rel = fresh > 0 ? std::fabs(R - fresh) / fresh : std::fabs(R);
      res.audit_max_rel = std::max(res.audit_max_rel, rel);
      R = fresh;  // keep drift from accumulating over long runs
    }
    MultiIndex now = total_content(s);
    if (o.kind == HKind::tilde ? !now.le(content) : now != content) res.conserved = false;
    if (o.kind == HKind::tilde) content = now;
    if (o.record_path) {
      res.jump_times.push_back(t);
      res.path.push_back(s);
    }
  }
  res.final_state = s;
  res.time = t;
  return res;
}

std::map<State, double> gillespie_ensemble(const State& initial, const GillespieOptions& o, std::uint64_t seed,
                                           std::size_t trajectories, unsigned threads) {
  if (threads == 0) threads = 1;
  std::vector<std::map<State, double>> per(trajectories);
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t k = w; k < trajectories; k += threads)
        per[k] = gillespie_run(initial, o, RngStream{seed, k}).occupation;
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  // merge in stream order so the float sums do not depend on scheduling
  std::map<State, double> pooled;
  double total = 0;
  for (auto& m : per)
    for (auto& [s, x] : m) {
      pooled[s] += x;
      total += x;
    }
  if (total > 0)
    for (auto& [s, x] : pooled) x /= total;
  return pooled;
}

MixedRun mixed_discrete_run(const State& initial, const Rational& lambda, const std::vector<Rational>& mu,
                            const Rational& q, std::size_t steps, const RngStream& rng) {
  check_config(initial, HKind::tilde);
  if (mu.size() != initial.size()) throw std::invalid_argument("mixed_discrete_run: need one mu per site");
  std::size_t n = initial[0].size();
  struct Column {
    std::vector<std::pair<MultiIndex, MultiIndex>> outs;  // (gamma_i, alpha_i)
    std::vector<double> probs;
  };
  std::vector<std::map<std::pair<MultiIndex, MultiIndex>, Column>> cache(mu.size());
  std::vector<Kernel2> vertex;
  for (auto& m : mu) vertex.push_back(script_S_kernel(PhiParams{q, lambda, m}));
  auto column = [&](std::size_t i, const MultiIndex& g, const MultiIndex& b) -> const Column& {
    auto key = std::make_pair(g, b);
    auto it = cache[i].find(key);
    if (it != cache[i].end()) return it->second;
    std::vector<LocalTerm> terms;
    vertex[i](g, b, terms);
    Column c;
    Rational sum = 0;
    for (auto& t : terms) {
      if (t.value < 0) throw std::domain_error("mixed_discrete_run: negative weight; parameters outside the regime");
      sum += t.value;
      c.outs.push_back({t.out1, t.out2});
      c.probs.push_back(to_double(t.value));
    }
    if (sum != 1) throw std::domain_error("mixed_discrete_run: column does not sum to one");
    return cache[i].emplace(key, std::move(c)).first->second;
  };
  auto eng = rng.engine();
  MixedRun run;
  State s = initial;
  run.states.push_back(s);
  for (std::size_t step = 0; step < steps; ++step) {
    MultiIndex g(n);
    int before = total_content(s).weight();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Column& c = column(i, g, s[i]);
      std::size_t k = pick(c.probs, 1.0, eng);
      g = c.outs[k].first;
      s[i] = c.outs[k].second;
    }
    run.exited.push_back(g);
    if (total_content(s).weight() > before) run.monotone = false;
    run.states.push_back(s);
  }
  return run;
}

double total_variation(const std::map<State, double>& empirical, const std::map<State, Rational>& exact) {
  double tot = 0;
  for (auto& [s, x] : empirical) tot += x;
  if (tot <= 0) throw std::invalid_argument("total_variation: empty histogram");
  double d = 0;
  for (auto& [s, p] : exact) {
    auto it = empirical.find(s);
    d += std::fabs((it == empirical.end() ? 0.0 : it->second / tot) - to_double(p));
  }
  for (auto& [s, x] : empirical)
    if (!exact.count(s)) d += x / tot;
  return d / 2;
}

}  // namespace zrp
