#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stomatch/calibration.hpp"
#include "stomatch/instance.hpp"
#include "stomatch/parallel.hpp"

namespace stomatch {

struct EdgeStats {
  std::size_t edge = 0;
  double flow = 0.0;
  double probe_freq = 0.0;
  double probe_stderr = 0.0;
  double match_freq = 0.0;
  double match_stderr = 0.0;
  double bound = 0.0;  // f_e times the framework's guaranteed fraction
};

struct ExperimentReport {
  std::string instance_digest;
  Framework framework = Framework::attn1;
  bool two_sided = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double lp_objective = 0.0;
  double expected_weight = 0.0;
  double weight_stderr = 0.0;
  double ratio = 0.0;
  double ratio_stderr = 0.0;
  double guaranteed_ratio = 0.0;
  std::vector<EdgeStats> per_edge;
  /// safe_freq[t-1][u]: fraction of trials with u safe at round t.
  std::vector<std::vector<double>> safe_freq;
  std::vector<double> gamma, alpha;
  CalibrationMeta calibration_meta;
  std::vector<CalibrationWarning> warnings;
  double wall_time_s = 0.0;
};

struct ExperimentOptions {
  bool two_sided = false;
  double epsilon = 0.05;
  /// Calibration samples per round; 0 uses the default sample size.
  std::size_t calibration_samples = 0;
  std::size_t inner_trials = 2000;
  Execution exec = Execution::parallel;
  /// Pre-calibrated table; calibrated from the seed when absent.
  std::optional<AttenuationTable> table;
};

/// Solves the LP, calibrates when the framework needs vertex factors, runs
/// K trials and aggregates them in trial order. Deterministic in (instance,
/// framework, K, seed, options); wall_time_s is the only field that varies.
ExperimentReport run_experiment(const Instance& instance, Framework framework, std::size_t trials, std::uint64_t seed,
                                const ExperimentOptions& options = {});

/// Mean and standard error sqrt(var / K) of per-trial values, where var is
/// the population variance (m (1 - m) for 0/1 data). Summed in index order.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);

/// JSON report; wall time is only included with `include_timing`, so
/// repeated runs produce identical bytes by default.
nlohmann::json to_json(const ExperimentReport& report, bool include_timing = false);

struct NamedInstance {
  std::string name;
  Instance instance;
};

inline constexpr const char* kSweepHeader =
    "instance,digest,framework,two_sided,trials,seed,lp_objective,expected_weight,weight_stderr,"
    "ratio,ratio_stderr,guaranteed_ratio,calibration_warnings,error";

/// One CSV row per (instance, framework), instance-major, under
/// kSweepHeader. A failing cell fills the `error` column and the sweep goes on.
std::string sweep(const std::vector<NamedInstance>& instances, const std::vector<Framework>& frameworks,
                  std::size_t trials, std::uint64_t seed, const ExperimentOptions& options = {});

}  // namespace stomatch
