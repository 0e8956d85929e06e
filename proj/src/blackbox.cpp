#include "stomatch/blackbox.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "stomatch/rounding.hpp"

namespace stomatch {

ProbeOutcome UniformRandomBlackBox::run(const StarProblem& star, Rng& rng, std::span<const double> edge_factors) const {
  if (!edge_factors.empty() && edge_factors.size() != star.edges.size()) {
    throw std::invalid_argument("UniformRandomBlackBox::run: one factor per star edge required");
  }
  std::vector<std::size_t> order = round_star(star, rng).chosen;
  // Fisher-Yates
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }

  ProbeOutcome out;
  const auto patience = static_cast<std::size_t>(star.patience);
  for (std::size_t pos : order) {
    if (out.patience_used() >= patience) break;
    const bool real = edge_factors.empty() || bernoulli(rng, edge_factors[pos]);
    const bool success = bernoulli(rng, star.edges[pos].prob);
    if (real) {
      out.probed.push_back(pos);
      if (success) {
        out.matched = pos;
        break;
      }
    } else {
      out.pretend_events.push_back({pos, success});
      if (success) break;
    }
  }
  return out;
}

BlackBoxProfile UniformRandomBlackBox::profile() const { return bb_ur_profile(); }

BlackBoxProfile bb_ur_profile() {
  return {0.5, [](double x) { return 1.0 - x / 2.0; }, true};
}

std::vector<ProbeEstimate> estimate_probe_probs(const BlackBox& box, const StarProblem& star, std::size_t trials,
                                                std::uint64_t seed, Execution exec) {
  if (trials == 0) throw std::invalid_argument("estimate_probe_probs: trials must be >= 1");
  const std::size_t k = star.edges.size();
  // One row of probe indicators per trial; summed in trial order below.
  std::vector<std::uint8_t> hits(trials * k, 0);
  for_each_index(trials, exec, [&](std::size_t t) {
    Rng rng = make_stream(seed, {t});
    for (std::size_t pos : box.run(star, rng).probed) hits[t * k + pos] = 1;
  });

  std::vector<std::size_t> counts(k, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < k; ++i) counts[i] += hits[t * k + i];
  }
  std::vector<ProbeEstimate> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double m = static_cast<double>(counts[i]) / static_cast<double>(trials);
    out[i] = {m, std::sqrt(m * (1.0 - m) / static_cast<double>(trials))};
  }
  return out;
}

}  // namespace stomatch
