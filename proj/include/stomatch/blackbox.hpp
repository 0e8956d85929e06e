#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stomatch/instance.hpp"
#include "stomatch/parallel.hpp"
#include "stomatch/random.hpp"

namespace stomatch {

/// A probe the walk decided to skip: the edge's success coin is still drawn
/// and a success ends the round unmatched, so the walk's dynamics are the
/// same as if the probe had been real.
struct PretendEvent {
  std::size_t pos = 0;
  bool success = false;
};

/// Result of one black-box run on a star. Edge references are positions
/// into StarProblem::edges.
struct ProbeOutcome {
  std::vector<std::size_t> probed;
  std::optional<std::size_t> matched;
  std::vector<PretendEvent> pretend_events;

  std::size_t patience_used() const { return probed.size() + pretend_events.size(); }
};

/// Guarantees a black box offers: every edge is probed with probability at
/// least alpha * g_e (Property A), at least g_e * R(lambda_e) (Property B),
/// and, with satisfies_c, at most g_e (Property C).
struct BlackBoxProfile {
  double alpha = 0.0;
  std::function<double(double)> ratio;
  bool satisfies_c = false;
};

/// Offline probing strategy on a star graph. Attenuation frameworks only
/// see this interface.
class BlackBox {
 public:
  virtual ~BlackBox() = default;

  /// Runs the strategy once. `edge_factors`, when non-empty, holds one
  /// factor in [0,1] per star edge: a would-be probe of edge i becomes a
  /// pretend event with probability 1 - edge_factors[i].
  virtual ProbeOutcome run(const StarProblem& star, Rng& rng, std::span<const double> edge_factors = {}) const = 0;

  virtual BlackBoxProfile profile() const = 0;
};

/// Dependent rounding followed by a uniformly random probe order over the
/// rounded edges.
class UniformRandomBlackBox final : public BlackBox {
 public:
  ProbeOutcome run(const StarProblem& star, Rng& rng, std::span<const double> edge_factors = {}) const override;
  BlackBoxProfile profile() const override;
};

/// alpha = 1/2, R(x) = 1 - x/2, Property C holds.
BlackBoxProfile bb_ur_profile();

struct ProbeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Empirical probe frequency of every star edge over `trials` unattenuated
/// runs. Trial i uses the stream derive_seed(seed, {i}), so the result does
/// not depend on `exec`. stderr = sqrt(mean (1 - mean) / trials).
std::vector<ProbeEstimate> estimate_probe_probs(const BlackBox& box, const StarProblem& star, std::size_t trials,
                                                std::uint64_t seed, Execution exec = Execution::serial);

}  // namespace stomatch
