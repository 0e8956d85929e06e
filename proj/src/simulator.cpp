#include "stomatch/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace stomatch {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}

}  // namespace

OnlineSimulator::OnlineSimulator(const Instance& instance, const LpSolution& lp, const BlackBox& box,
                                 const AttenuationTable& table, std::shared_ptr<StarEstimateCache> cache,
                                 SimulatorOptions options)
    : instance_(instance), lp_(lp), box_(box), table_(table), cache_(std::move(cache)), options_(options),
      profile_(box.profile()) {
  if (lp.flow.size() != instance.edges.size()) throw std::invalid_argument("OnlineSimulator: LP does not match instance");
  check_table(table, instance, table.framework, false);
  if (options.two_sided && table.framework != Framework::attn1) {
    throw std::invalid_argument("OnlineSimulator: two-sided timeouts are only supported with attn1");
  }
  if (!cache_ && table.framework != Framework::attn2) {
    throw std::invalid_argument("OnlineSimulator: edge attenuation needs a star estimate cache");
  }
  double acc = 0.0;
  for (const auto& v : instance.online) {
    acc += v.rate / instance.horizon;
    arrival_cdf_.push_back(acc);
  }
}

RunState OnlineSimulator::initial_state() const {
  RunState s;
  s.safe.assign(instance_.offline.size(), 1);
  s.remaining_probes.resize(instance_.offline.size());
  for (std::size_t u = 0; u < instance_.offline.size(); ++u) {
    s.remaining_probes[u] = options_.two_sided ? instance_.offline[u].timeout : instance_.horizon;
  }
  return s;
}

void OnlineSimulator::attenuate(RunState& state, Rng& rng) const {
  if (table_.sigma.empty() || state.round < 2) return;
  for (std::size_t u = 0; u < state.safe.size(); ++u) {
    if (!state.safe[u]) continue;
    const double keep = table_.keep_probability(state.round, u);
    if (keep < 1.0 && !bernoulli(rng, keep)) state.safe[u] = 0;
  }
}

std::size_t OnlineSimulator::sample_arrival(Rng& rng) const {
  const double x = uniform01(rng) * arrival_cdf_.back();
  const auto it = std::upper_bound(arrival_cdf_.begin(), arrival_cdf_.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - arrival_cdf_.begin()), arrival_cdf_.size() - 1);
}

void OnlineSimulator::play_round(RunState& state, Rng& rng, TrialRecord* record) const {
  const int t = state.round;
  const std::size_t v = sample_arrival(rng);

  // Edges with f_e = 0 can never be rounded up, so they are left out.
  std::vector<std::size_t> safe_edges;
  for (std::size_t e : instance_.edges_at_online(v)) {
    if (state.safe[instance_.offline_of(e)] && lp_.flow[e] > 0.0) safe_edges.push_back(e);
  }
  if (!safe_edges.empty()) {
    const StarProblem star = induce_star(instance_, lp_, v, safe_edges);

    std::vector<double> factors;
    if (table_.framework != Framework::attn2) {
      const double target = table_.framework == Framework::attn1 ? profile_.alpha : table_.alpha[t - 1];
      const auto probs = cache_->probe_probs(box_, star);
      factors = factors_from_probe_probs(star, *probs, target, options_.epsilon / instance_.horizon);
    }
    const ProbeOutcome out = box_.run(star, rng, factors);
    check(out.patience_used() <= static_cast<std::size_t>(star.patience), "online patience exceeded");

    for (std::size_t pos : out.probed) {
      const std::size_t e = star.edges[pos].edge;
      const std::size_t u = instance_.offline_of(e);
      check(state.safe[u], "probed an unsafe offline vertex");
      if (record) ++record->probes[e];
      if (options_.two_sided) {
        check(--state.remaining_probes[u] >= 0, "offline probe budget went negative");
      }
    }
    if (out.matched) {
      const std::size_t e = star.edges[*out.matched].edge;
      const std::size_t u = instance_.offline_of(e);
      state.safe[u] = 0;
      state.matches.push_back({e, t, instance_.edges[e].weight});
      state.weight += instance_.edges[e].weight;
      if (record) {
        check(record->matched[e] == 0, "offline vertex matched twice");
        record->matched[e] = 1;
      }
    }
    if (options_.two_sided) {
      for (std::size_t pos : out.probed) {
        const std::size_t u = instance_.offline_of(star.edges[pos].edge);
        if (state.remaining_probes[u] == 0) state.safe[u] = 0;
      }
    }
  }
  ++state.round;
}

TrialRecord OnlineSimulator::run_trial(Rng& rng) const {
  const std::size_t n = static_cast<std::size_t>(instance_.horizon);
  const std::size_t m = instance_.offline.size();
  TrialRecord rec;
  rec.probes.assign(instance_.edges.size(), 0);
  rec.matched.assign(instance_.edges.size(), 0);
  rec.safe.assign(n * m, 0);

  RunState state = initial_state();
  for (std::size_t t = 1; t <= n; ++t) {
    attenuate(state, rng);
    std::copy(state.safe.begin(), state.safe.end(), rec.safe.begin() + static_cast<std::ptrdiff_t>((t - 1) * m));
    play_round(state, rng, &rec);
  }
  std::size_t matched_vertices = 0;
  for (std::uint8_t s : rec.matched) matched_vertices += s;
  check(matched_vertices == state.matches.size(), "match bookkeeping mismatch");
  rec.weight = state.weight;
  return rec;
}

}  // namespace stomatch
