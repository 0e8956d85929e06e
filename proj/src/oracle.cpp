#include "stomatch/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace stomatch {

namespace {

// Budget of each offline vertex packed in mixed radix; digit 0 means the
// vertex is matched or out of probes.
class DpSolver {
 public:
  DpSolver(const Instance& inst, bool two_sided, std::size_t limit) : inst_(inst), two_sided_(two_sided) {
    const std::size_t m = inst.offline.size();
    radix_.resize(m);
    stride_.resize(m);
    std::size_t per_round = 1;
    for (std::size_t u = 0; u < m; ++u) {
      const int cap = two_sided ? std::min(inst.offline[u].timeout, inst.horizon) : 1;
      radix_[u] = static_cast<std::size_t>(cap) + 1;
      stride_[u] = per_round;
      if (per_round > limit / radix_[u]) throw std::length_error("optimal_online_dp: state space too large");
      per_round *= radix_[u];
    }
    if (per_round > limit / static_cast<std::size_t>(inst.horizon)) {
      throw std::length_error(fmt::format("optimal_online_dp: {} x {} states exceed the limit {}", per_round,
                                          inst.horizon, limit));
    }
    per_round_ = per_round;
    memo_.assign(static_cast<std::size_t>(inst.horizon), std::vector<double>(per_round, kUnset));
  }

  PolicyValue solve() {
    std::size_t start = 0;
    for (std::size_t u = 0; u < radix_.size(); ++u) start += (radix_[u] - 1) * stride_[u];
    PolicyValue out;
    out.expected_weight = value(1, start);
    out.state_count = evaluated_;
    return out;
  }

 private:
  static constexpr double kUnset = -1.0;

  std::size_t digit(std::size_t state, std::size_t u) const { return (state / stride_[u]) % radix_[u]; }

  double value(int round, std::size_t state) {
    if (round > inst_.horizon) return 0.0;
    double& slot = memo_[static_cast<std::size_t>(round - 1)][state];
    if (slot != kUnset) return slot;
    double total = 0.0;
    for (std::size_t v = 0; v < inst_.online.size(); ++v) {
      total += inst_.online[v].rate / inst_.horizon * best_probing(round, v, state);
    }
    ++evaluated_;
    slot = total;
    return total;
  }

  // Optimal expected weight of round `round` plus the future, for an arrival
  // of type v with the round starting in `state`.
  double best_probing(int round, std::size_t v, std::size_t state) {
    const auto& edges = inst_.edges_at_online(v);
    std::vector<double> memo(std::size_t{1} << edges.size(), kUnset);
    return probe_from(round, v, state, 0, memo);
  }

  double probe_from(int round, std::size_t v, std::size_t state, std::size_t probed, std::vector<double>& memo) {
    double& slot = memo[probed];
    if (slot != kUnset) return slot;
    const auto& edges = inst_.edges_at_online(v);
    double best = value(round + 1, state);  // stop probing
    if (std::popcount(probed) < inst_.online[v].timeout) {
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (probed & (std::size_t{1} << i)) continue;
        const std::size_t e = edges[i];
        const std::size_t u = inst_.offline_of(e);
        const std::size_t b = digit(state, u);
        if (b == 0) continue;
        const double p = inst_.edges[e].prob;
        const std::size_t gone = state - b * stride_[u];
        const std::size_t after_fail = two_sided_ ? state - stride_[u] : state;
        const double success = p * (inst_.edges[e].weight + value(round + 1, gone));
        const double failure = (1.0 - p) * probe_from(round, v, after_fail, probed | (std::size_t{1} << i), memo);
        best = std::max(best, success + failure);
      }
    }
    slot = best;
    return best;
  }

  const Instance& inst_;
  bool two_sided_;
  std::vector<std::size_t> radix_, stride_;
  std::size_t per_round_ = 1;
  std::vector<std::vector<double>> memo_;
  std::size_t evaluated_ = 0;
};

}  // namespace

PolicyValue optimal_online_dp(const Instance& instance, bool two_sided, std::size_t state_limit) {
  for (std::size_t v = 0; v < instance.online.size(); ++v) {
    if (instance.edges_at_online(v).size() > 20) throw std::length_error("optimal_online_dp: online degree above 20");
  }
  return DpSolver(instance, two_sided, state_limit).solve();
}

// ---------------------------------------------------------------------------

namespace {

using RoundingLaw = std::map<unsigned, double>;  // chosen-set bitmask -> probability

double snapped(double x) {
  if (x < 1e-12) return 0.0;
  if (x > 1.0 - 1e-12) return 1.0;
  return x;
}

void enumerate_rounding(std::vector<double> g, double weight, RoundingLaw& law) {
  if (weight == 0.0) return;
  std::vector<std::size_t> frac;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 0.0 && g[i] < 1.0) frac.push_back(i);
  }
  if (frac.empty()) {
    unsigned mask = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 1.0) mask |= 1u << i;
    }
    law[mask] += weight;
    return;
  }
  if (frac.size() == 1) {
    const std::size_t i = frac[0];
    const double q = g[i];
    g[i] = 1.0;
    enumerate_rounding(g, weight * q, law);
    g[i] = 0.0;
    enumerate_rounding(g, weight * (1.0 - q), law);
    return;
  }
  const std::size_t i = frac[0], j = frac[1];
  const double raise = std::min(1.0 - g[i], g[j]);  // i up, j down
  const double lower = std::min(g[i], 1.0 - g[j]);  // i down, j up
  std::vector<double> up = g, down = g;
  up[i] = snapped(g[i] + raise);
  up[j] = snapped(g[j] - raise);
  down[i] = snapped(g[i] - lower);
  down[j] = snapped(g[j] + lower);
  enumerate_rounding(std::move(up), weight * lower / (raise + lower), law);
  enumerate_rounding(std::move(down), weight * raise / (raise + lower), law);
}

}  // namespace

std::vector<double> exact_star_probe_probs(const StarProblem& star) {
  const std::size_t k = star.edges.size();
  if (k > kExactStarMaxEdges) {
    throw std::length_error(fmt::format("exact_star_probe_probs: {} edges exceed {}", k, kExactStarMaxEdges));
  }
  std::vector<double> g(k);
  for (std::size_t i = 0; i < k; ++i) g[i] = snapped(star.edges[i].g);
  RoundingLaw law;
  enumerate_rounding(g, 1.0, law);

  std::vector<double> out(k, 0.0);
  for (const auto& [mask, weight] : law) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) order.push_back(i);
    }
    double perms = 0.0;
    std::vector<double> reach(k, 0.0);
    do {
      perms += 1.0;
      double alive = 1.0;  // nobody before has succeeded
      for (std::size_t pos = 0; pos < order.size() && pos < static_cast<std::size_t>(star.patience); ++pos) {
        reach[order[pos]] += alive;
        alive *= 1.0 - star.edges[order[pos]].prob;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    for (std::size_t i = 0; i < k; ++i) out[i] += weight * reach[i] / perms;
  }
  return out;
}

}  // namespace stomatch
