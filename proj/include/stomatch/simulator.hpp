#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "stomatch/blackbox.hpp"
#include "stomatch/calibration.hpp"
#include "stomatch/instance.hpp"
#include "stomatch/lp.hpp"
#include "stomatch/random.hpp"

namespace stomatch {

struct Match {
  std::size_t edge = 0;
  int round = 0;
  double weight = 0.0;
};

/// Mutable state of one online run. `safe[u]` is cleared when u is matched,
/// discarded by vertex attenuation, or (two-sided) runs out of probes.
struct RunState {
  int round = 1;
  std::vector<std::uint8_t> safe;
  std::vector<int> remaining_probes;
  std::vector<Match> matches;
  double weight = 0.0;
};

/// Per-trial indicators. `probes[e]` counts real probes of e over all
/// rounds; `safe` is row-major [round-1][u], sampled after the round's
/// vertex attenuation.
struct TrialRecord {
  double weight = 0.0;
  std::vector<std::uint16_t> probes;
  std::vector<std::uint8_t> matched;
  std::vector<std::uint8_t> safe;
};

struct SimulatorOptions {
  bool two_sided = false;
  double epsilon = 0.05;
};

/// Plays the online process for one framework. Holds references to its
/// inputs; they must outlive the simulator. Const member functions may be
/// called concurrently with distinct states and rngs.
class OnlineSimulator {
 public:
  OnlineSimulator(const Instance& instance, const LpSolution& lp, const BlackBox& box, const AttenuationTable& table,
                  std::shared_ptr<StarEstimateCache> cache, SimulatorOptions options);

  RunState initial_state() const;

  /// Vertex attenuation at the start of state.round: each safe u is kept
  /// independently with its table probability.
  void attenuate(RunState& state, Rng& rng) const;

  /// One arrival, probing and commit; advances state.round.
  void play_round(RunState& state, Rng& rng, TrialRecord* record) const;

  /// All n rounds from scratch.
  TrialRecord run_trial(Rng& rng) const;

  const Instance& instance() const { return instance_; }

 private:
  std::size_t sample_arrival(Rng& rng) const;

  const Instance& instance_;
  const LpSolution& lp_;
  const BlackBox& box_;
  const AttenuationTable& table_;
  std::shared_ptr<StarEstimateCache> cache_;
  SimulatorOptions options_;
  BlackBoxProfile profile_;
  std::vector<double> arrival_cdf_;
};

}  // namespace stomatch
