#include "stomatch/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "stomatch/blackbox.hpp"
#include "stomatch/frameworks.hpp"
#include "stomatch/lp.hpp"

namespace stomatch {

using nlohmann::json;

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double k = static_cast<double>(values.size());
  double sum = 0.0;
  for (double x : values) sum += x;
  const double mean = sum / k;
  double sq = 0.0;
  for (double x : values) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / k / k)};
}

ExperimentReport run_experiment(const Instance& instance, Framework framework, std::size_t trials, std::uint64_t seed,
                                const ExperimentOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (trials == 0) throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (const auto violations = validate(instance); !violations.empty()) {
    throw std::invalid_argument("run_experiment: invalid instance: " + violations.front().message);
  }
  if (options.two_sided && framework != Framework::attn1) {
    throw std::invalid_argument("two-sided timeouts are only supported with attn1");
  }

  const UniformRandomBlackBox box;
  const LpSolution lp = solve_benchmark(instance, !options.two_sided);
  auto cache = std::make_shared<StarEstimateCache>(derive_seed(seed, {3}), options.inner_trials);

  AttenuationTable table;
  if (options.table) {
    table = *options.table;
  } else if (framework == Framework::attn1) {
    table = schedule_table(instance, box.profile(), framework);
  } else {
    CalibrationOptions cal;
    cal.epsilon = options.epsilon;
    cal.samples = options.calibration_samples;
    cal.inner_trials = options.inner_trials;
    cal.seed = derive_seed(seed, {1});
    cal.exec = options.exec;
    cal.cache = cache;
    table = calibrate_vertex_sigma(instance, lp, box, framework, cal);
  }

  RunOptions run;
  run.two_sided = options.two_sided;
  run.epsilon = options.epsilon;
  run.inner_trials = options.inner_trials;
  run.cache = cache;
  const auto records = run_trials(instance, lp, box, framework, table, trials, derive_seed(seed, {2}), run, options.exec);

  ExperimentReport rep;
  rep.instance_digest = digest(instance);
  rep.framework = framework;
  rep.two_sided = options.two_sided;
  rep.trials = trials;
  rep.seed = seed;
  rep.lp_objective = lp.objective;
  rep.gamma = table.gamma;
  rep.alpha = table.alpha;
  rep.calibration_meta = table.meta;
  rep.warnings = table.warnings;
  rep.guaranteed_ratio = guaranteed_fraction(box.profile(), instance.horizon, framework, options.two_sided);

  std::vector<double> column(trials);
  for (std::size_t k = 0; k < trials; ++k) column[k] = records[k].weight;
  std::tie(rep.expected_weight, rep.weight_stderr) = mean_and_stderr(column);
  if (lp.objective > 0.0) {
    rep.ratio = rep.expected_weight / lp.objective;
    rep.ratio_stderr = rep.weight_stderr / lp.objective;
  }

  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    EdgeStats s;
    s.edge = e;
    s.flow = lp.flow[e];
    s.bound = lp.flow[e] * rep.guaranteed_ratio;
    for (std::size_t k = 0; k < trials; ++k) column[k] = records[k].probes[e];
    std::tie(s.probe_freq, s.probe_stderr) = mean_and_stderr(column);
    for (std::size_t k = 0; k < trials; ++k) column[k] = records[k].matched[e];
    std::tie(s.match_freq, s.match_stderr) = mean_and_stderr(column);
    rep.per_edge.push_back(s);
  }

  const std::size_t n = static_cast<std::size_t>(instance.horizon), m = instance.offline.size();
  rep.safe_freq.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t u = 0; u < m; ++u) {
      std::size_t count = 0;
      for (std::size_t k = 0; k < trials; ++k) count += records[k].safe[t * m + u];
      rep.safe_freq[t][u] = static_cast<double>(count) / static_cast<double>(trials);
    }
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

json to_json(const ExperimentReport& r, bool include_timing) {
  json edges = json::array();
  for (const auto& s : r.per_edge) {
    edges.push_back({{"edge", s.edge},
                     {"f", s.flow},
                     {"probe_freq", s.probe_freq},
                     {"probe_stderr", s.probe_stderr},
                     {"match_freq", s.match_freq},
                     {"match_stderr", s.match_stderr},
                     {"bound", s.bound}});
  }
  json warnings = json::array();
  for (const auto& w : r.warnings) {
    warnings.push_back({{"round", w.round}, {"u", w.offline}, {"estimate", w.estimate}, {"target", w.target}});
  }
  json out = {{"instance_digest", r.instance_digest},
              {"framework", to_string(r.framework)},
              {"two_sided", r.two_sided},
              {"trials", r.trials},
              {"seed", r.seed},
              {"lp_objective", r.lp_objective},
              {"expected_weight", r.expected_weight},
              {"weight_stderr", r.weight_stderr},
              {"ratio", r.ratio},
              {"ratio_stderr", r.ratio_stderr},
              {"guaranteed_ratio", r.guaranteed_ratio},
              {"per_edge", edges},
              {"safe_freq", r.safe_freq},
              {"gamma", r.gamma},
              {"alpha", r.alpha},
              {"calibration_meta",
               {{"samples", r.calibration_meta.samples},
                {"epsilon", r.calibration_meta.epsilon},
                {"seed", r.calibration_meta.seed},
                {"inner_trials", r.calibration_meta.inner_trials}}},
              {"warnings", warnings}};
  if (include_timing) out["wall_time_s"] = r.wall_time_s;
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep(const std::vector<NamedInstance>& instances, const std::vector<Framework>& frameworks,
                  std::size_t trials, std::uint64_t seed, const ExperimentOptions& options) {
  std::ostringstream out;
  out << kSweepHeader << '\n';
  for (const auto& named : instances) {
    for (Framework fw : frameworks) {
      std::string prefix = fmt::format("{},{},{},{},{},{}", csv_field(named.name), digest(named.instance),
                                       to_string(fw), options.two_sided ? 1 : 0, trials, seed);
      try {
        const ExperimentReport r = run_experiment(named.instance, fw, trials, seed, options);
        out << fmt::format("{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{},\n", prefix, r.lp_objective,
                           r.expected_weight, r.weight_stderr, r.ratio, r.ratio_stderr, r.guaranteed_ratio,
                           r.warnings.size());
      } catch (const std::exception& err) {
        out << fmt::format("{},,,,,,,,{}\n", prefix, csv_field(err.what()));
      }
    }
  }
  return out.str();
}

}  // namespace stomatch
