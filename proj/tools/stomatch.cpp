#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stomatch/blackbox.hpp"
#include "stomatch/calibration.hpp"
#include "stomatch/frameworks.hpp"
#include "stomatch/harness.hpp"
#include "stomatch/instance.hpp"
#include "stomatch/lp.hpp"
#include "stomatch/oracle.hpp"

using nlohmann::json;
using namespace stomatch;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitWarnings = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& err) {
    throw std::invalid_argument(path + ": " + err.what());
  }
}

Instance checked_instance(const std::string& path) {
  Instance inst = load_instance(path);
  if (const auto violations = validate(inst); !violations.empty()) {
    std::string msg = path + " is invalid:";
    for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
    throw std::invalid_argument(msg);
  }
  return inst;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text << '\n';
}

json lp_json(const LpSolution& lp) {
  return {{"objective", lp.objective}, {"dual_objective", lp.dual_objective}, {"f", lp.flow}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic matching with timeouts: LP benchmark, attenuation frameworks and oracles"};
  app.require_subcommand(1);

  std::string instance_path, star_path, out_path, table_path, framework_tag = "attn1";
  std::vector<std::string> instance_paths, framework_tags{"attn1", "attn2", "attn3"};
  bool two_sided = false, strict = false, timing = false;
  std::size_t trials = 1000, inner_trials = 2000, samples = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.05;

  auto* lp_cmd = app.add_subcommand("lp", "Benchmark LP")->require_subcommand(1);
  auto* lp_solve = lp_cmd->add_subcommand("solve", "Solve the benchmark LP and print f as JSON");
  lp_solve->add_option("instance", instance_path)->required();
  lp_solve->add_flag("--two-sided", two_sided, "Use offline timeouts t_u");
  lp_solve->add_option("--out", out_path);

  auto* bb_cmd = app.add_subcommand("blackbox", "Star probing strategy")->require_subcommand(1);
  auto* bb_probe = bb_cmd->add_subcommand("probe-probs", "Monte Carlo probe probabilities of a star");
  bb_probe->add_option("star", star_path)->required();
  bb_probe->add_option("--trials", trials)->capture_default_str();
  bb_probe->add_option("--seed", seed)->capture_default_str();
  bb_probe->add_option("--out", out_path);

  auto* cal_cmd = app.add_subcommand("calibrate", "Calibrate vertex attenuation");
  cal_cmd->add_option("instance", instance_path)->required();
  cal_cmd->add_option("--framework", framework_tag)->check(CLI::IsMember({"attn2", "attn3"}))->required();
  cal_cmd->add_option("--epsilon", epsilon)->capture_default_str();
  cal_cmd->add_option("--samples", samples, "Samples per round (0: default size)")->capture_default_str();
  cal_cmd->add_option("--inner-trials", inner_trials)->capture_default_str();
  cal_cmd->add_option("--seed", seed)->capture_default_str();
  cal_cmd->add_option("--out", out_path);
  cal_cmd->add_flag("--strict", strict, "Exit 3 on calibration warnings");

  auto* run_cmd = app.add_subcommand("run", "Run K trials of a framework");
  run_cmd->add_option("instance", instance_path)->required();
  run_cmd->add_option("--framework", framework_tag)->check(CLI::IsMember({"attn1", "attn2", "attn3"}))->capture_default_str();
  run_cmd->add_flag("--two-sided", two_sided);
  run_cmd->add_option("--trials", trials)->capture_default_str();
  run_cmd->add_option("--seed", seed)->required();
  run_cmd->add_option("--epsilon", epsilon)->capture_default_str();
  run_cmd->add_option("--samples", samples)->capture_default_str();
  run_cmd->add_option("--inner-trials", inner_trials)->capture_default_str();
  run_cmd->add_option("--table", table_path, "Pre-calibrated table");
  run_cmd->add_option("--out", out_path);
  run_cmd->add_flag("--timing", timing, "Include wall time in the report");
  run_cmd->add_flag("--strict", strict);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact baselines on tiny inputs")->require_subcommand(1);
  auto* oracle_dp = oracle_cmd->add_subcommand("dp", "Optimal online policy value");
  oracle_dp->add_option("instance", instance_path)->required();
  oracle_dp->add_flag("--two-sided", two_sided);
  oracle_dp->add_option("--out", out_path);
  auto* oracle_star = oracle_cmd->add_subcommand("star", "Exact star probe probabilities");
  oracle_star->add_option("star", star_path)->required();
  oracle_star->add_option("--out", out_path);

  auto* sweep_cmd = app.add_subcommand("sweep", "Cross product of instances and frameworks as CSV");
  sweep_cmd->add_option("instances", instance_paths)->required();
  sweep_cmd->add_option("--frameworks", framework_tags)->delimiter(',')->capture_default_str();
  sweep_cmd->add_flag("--two-sided", two_sided);
  sweep_cmd->add_option("--trials", trials)->capture_default_str();
  sweep_cmd->add_option("--seed", seed)->required();
  sweep_cmd->add_option("--epsilon", epsilon)->capture_default_str();
  sweep_cmd->add_option("--samples", samples)->capture_default_str();
  sweep_cmd->add_option("--inner-trials", inner_trials)->capture_default_str();
  sweep_cmd->add_option("--out", out_path);

  auto* gen_cmd = app.add_subcommand("generate", "Write a fixture instance")->require_subcommand(1);
  int gen_n = 10;
  RandomInstanceSpec spec;
  auto* gen_gap = gen_cmd->add_subcommand("gap", "Stochasticity-gap instance");
  gen_gap->add_option("n", gen_n)->required();
  gen_gap->add_option("--out", out_path);
  auto* gen_random = gen_cmd->add_subcommand("random", "Random feasible instance");
  gen_random->add_option("--offline", spec.num_offline)->capture_default_str();
  gen_random->add_option("--online", spec.num_online)->capture_default_str();
  gen_random->add_option("--density", spec.density)->capture_default_str();
  gen_random->add_option("--seed", seed)->capture_default_str();
  gen_random->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (lp_solve->parsed()) {
      const Instance inst = checked_instance(instance_path);
      emit(lp_json(solve_benchmark(inst, !two_sided)).dump(2), out_path);
    } else if (bb_probe->parsed()) {
      const StarProblem star = star_from_json(read_json(star_path));
      const UniformRandomBlackBox box;
      json rows = json::array();
      const auto est = estimate_probe_probs(box, star, trials, seed, Execution::parallel);
      for (std::size_t i = 0; i < est.size(); ++i) {
        rows.push_back({{"id", star.edges[i].edge}, {"g", star.edges[i].g}, {"probe", est[i].mean},
                        {"stderr", est[i].std_error}});
      }
      emit(json{{"trials", trials}, {"seed", seed}, {"edges", rows}}.dump(2), out_path);
    } else if (cal_cmd->parsed()) {
      const Instance inst = checked_instance(instance_path);
      const UniformRandomBlackBox box;
      CalibrationOptions opts;
      opts.epsilon = epsilon;
      opts.samples = samples;
      opts.inner_trials = inner_trials;
      opts.seed = seed;
      const auto table = calibrate_vertex_sigma(inst, solve_benchmark(inst, true), box,
                                                framework_from_string(framework_tag), opts);
      emit(to_json(table).dump(2), out_path);
      for (const auto& w : table.warnings) {
        std::cerr << "warning: round " << w.round << " u=" << w.offline << " safe " << w.estimate << " < target "
                  << w.target << '\n';
      }
      if (strict && !table.warnings.empty()) return kExitWarnings;
    } else if (run_cmd->parsed()) {
      const Instance inst = checked_instance(instance_path);
      ExperimentOptions opts;
      opts.two_sided = two_sided;
      opts.epsilon = epsilon;
      opts.calibration_samples = samples;
      opts.inner_trials = inner_trials;
      if (!table_path.empty()) opts.table = table_from_json(read_json(table_path));
      const auto report = run_experiment(inst, framework_from_string(framework_tag), trials, seed, opts);
      emit(to_json(report, timing).dump(2), out_path);
      if (strict && !report.warnings.empty()) return kExitWarnings;
    } else if (oracle_dp->parsed()) {
      const Instance inst = checked_instance(instance_path);
      const auto value = optimal_online_dp(inst, two_sided);
      emit(json{{"expected_weight", value.expected_weight}, {"state_count", value.state_count}}.dump(2), out_path);
    } else if (oracle_star->parsed()) {
      const StarProblem star = star_from_json(read_json(star_path));
      const auto probs = exact_star_probe_probs(star);
      json rows = json::array();
      for (std::size_t i = 0; i < probs.size(); ++i) rows.push_back({{"id", star.edges[i].edge}, {"probe", probs[i]}});
      emit(json{{"edges", rows}}.dump(2), out_path);
    } else if (sweep_cmd->parsed()) {
      std::vector<NamedInstance> named;
      for (const auto& p : instance_paths) named.push_back({p, checked_instance(p)});
      std::vector<Framework> frameworks;
      for (const auto& tag : framework_tags) {
        if (!tag.empty()) frameworks.push_back(framework_from_string(tag));
      }
      ExperimentOptions opts;
      opts.two_sided = two_sided;
      opts.epsilon = epsilon;
      opts.calibration_samples = samples;
      opts.inner_trials = inner_trials;
      std::string csv = sweep(named, frameworks, trials, seed, opts);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream(out_path) << csv;
      }
    } else if (gen_gap->parsed()) {
      emit(to_json(gap_instance(gen_n)).dump(2), out_path);
    } else if (gen_random->parsed()) {
      emit(to_json(random_instance(seed, spec)).dump(2), out_path);
    }
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
