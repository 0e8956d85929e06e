#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stomatch/blackbox.hpp"
#include "stomatch/instance.hpp"
#include "stomatch/lp.hpp"
#include "stomatch/parallel.hpp"

namespace stomatch {

/// attn1: edge attenuation to a constant alpha.
/// attn2: vertex attenuation only.
/// attn3: edge and vertex attenuation following the gamma/alpha recurrence.
enum class Framework { attn1, attn2, attn3 };

const char* to_string(Framework framework);
/// Accepts "attn1", "attn2", "attn3". Throws std::invalid_argument otherwise.
Framework framework_from_string(std::string_view tag);

/// Per-round targets, index t-1 for round t: gamma is the probability every
/// offline vertex should be safe at the start of the round, alpha the
/// fraction of g_e each safe edge should be probed with.
struct Schedule {
  std::vector<double> gamma;
  std::vector<double> alpha;
};

/// attn1: alpha constant, gamma_t = (1 - alpha/n)^(t-1) (the worst-case
/// survival of a fully loaded vertex, informational only).
/// attn2: gamma_t = (1 - 1/n)^(t-1), alpha_t = R(gamma_t) (implied lower bound).
/// attn3: gamma_1 = 1, alpha_t = R(gamma_t), gamma_{t+1} = gamma_t (1 - alpha_t / n).
Schedule target_schedule(const BlackBoxProfile& profile, int n, Framework framework);

/// Samples needed so an estimate of a mean >= beta/2 is within relative
/// error epsilon with probability 1 - delta: ceil(6 / (eps^2 beta) ln(2/delta)).
/// Throws std::invalid_argument outside eps, delta in (0,1), beta in (0,1].
std::size_t sample_size(double epsilon, double delta, double beta);

/// N used by calibration when none is given: delta = eps / (2n), beta = 1/e.
std::size_t default_sample_size(double epsilon, int n);

struct CalibrationMeta {
  std::size_t samples = 0;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  std::size_t inner_trials = 2000;
};

/// Recorded when an estimated survival probability falls below its target by
/// more than epsilon, which the analysis rules out up to sampling error.
struct CalibrationWarning {
  int round = 0;
  std::size_t offline = 0;
  double estimate = 0.0;
  double target = 0.0;
};

struct AttenuationTable {
  Framework framework = Framework::attn1;
  int horizon = 1;
  std::string instance_digest;
  std::vector<double> gamma;
  std::vector<double> alpha;
  /// sigma[t-1][u]: probability a still-safe u is kept at the start of round
  /// t. Empty when the framework applies no vertex attenuation.
  std::vector<std::vector<double>> sigma;
  CalibrationMeta meta;
  std::vector<CalibrationWarning> warnings;

  double keep_probability(int round, std::size_t u) const {
    return sigma.empty() ? 1.0 : sigma[static_cast<std::size_t>(round - 1)][u];
  }
};

/// Table holding the framework's schedule and no vertex factors.
AttenuationTable schedule_table(const Instance& instance, const BlackBoxProfile& profile, Framework framework);

/// Throws std::invalid_argument unless the table fits the instance and
/// framework. Vertex factors are required for attn2/attn3 when
/// `require_sigma` is set.
void check_table(const AttenuationTable& table, const Instance& instance, Framework framework, bool require_sigma);

nlohmann::json to_json(const AttenuationTable& table);
AttenuationTable table_from_json(const nlohmann::json& doc);

/// Memo of unattenuated probe-probability estimates per realized star.
///
/// A star is identified by its edge positions (g and p follow from the
/// instance and LP). Each estimate is drawn from a stream derived from the
/// cache seed and the key, so an entry is a pure function of the key no
/// matter which thread or trial asks first. Thread-safe.
class StarEstimateCache {
 public:
  StarEstimateCache(std::uint64_t seed, std::size_t inner_trials, std::size_t max_entries = 1 << 20);
  ~StarEstimateCache();

  std::shared_ptr<const std::vector<double>> probe_probs(const BlackBox& box, const StarProblem& star);

  std::size_t inner_trials() const { return inner_trials_; }
  std::size_t size() const;

 private:
  struct Impl;
  std::uint64_t seed_;
  std::size_t inner_trials_;
  std::size_t max_entries_;
  std::unique_ptr<Impl> impl_;
};

/// Factors a_e = clamp(alpha * g_e / probe_e, 0, 1) that bring each edge's
/// probe probability down to alpha * g_e. Edges with g_e < min_g, or never
/// probed in the estimate, keep factor 1.
std::vector<double> factors_from_probe_probs(const StarProblem& star, std::span<const double> probe_probs,
                                             double alpha_target, double min_g);

/// Estimates the star's probe probabilities with `inner_trials` unattenuated
/// runs (streams derived from `seed`) and converts them to factors.
std::vector<double> edge_factors_for_round(const BlackBox& box, const StarProblem& star, double alpha_target,
                                           std::size_t inner_trials, std::uint64_t seed, double min_g = 0.0);

struct CalibrationOptions {
  double epsilon = 0.05;
  /// Simulations per round; 0 selects default_sample_size(epsilon, n).
  std::size_t samples = 0;
  std::size_t inner_trials = 2000;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
  /// Shared with later runs to reuse star estimates; created when null.
  std::shared_ptr<StarEstimateCache> cache;
};

/// Round-by-round vertex attenuation. For t = 2..n, simulates rounds
/// 1..t-1 `samples` times with the factors already frozen, estimates
/// beta_{u,t} = Pr[u safe at the start of t] and freezes
/// sigma_{u,t} = min(1, gamma_t / beta_{u,t}). Only attn2 and attn3.
AttenuationTable calibrate_vertex_sigma(const Instance& instance, const LpSolution& lp, const BlackBox& box,
                                        Framework framework, const CalibrationOptions& options);

}  // namespace stomatch
