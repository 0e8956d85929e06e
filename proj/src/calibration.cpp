#include "stomatch/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "stomatch/simulator.hpp"

namespace stomatch {

using nlohmann::json;

const char* to_string(Framework framework) {
  switch (framework) {
    case Framework::attn1: return "attn1";
    case Framework::attn2: return "attn2";
    case Framework::attn3: return "attn3";
  }
  return "unknown";
}

Framework framework_from_string(std::string_view tag) {
  if (tag == "attn1") return Framework::attn1;
  if (tag == "attn2") return Framework::attn2;
  if (tag == "attn3") return Framework::attn3;
  throw std::invalid_argument(fmt::format("unknown framework '{}'", tag));
}

Schedule target_schedule(const BlackBoxProfile& profile, int n, Framework framework) {
  if (n < 1) throw std::invalid_argument("target_schedule: n must be >= 1");
  Schedule s;
  s.gamma.resize(n);
  s.alpha.resize(n);
  const double inv_n = 1.0 / n;
  switch (framework) {
    case Framework::attn1:
      for (int t = 0; t < n; ++t) {
        s.alpha[t] = profile.alpha;
        s.gamma[t] = std::pow(1.0 - profile.alpha * inv_n, t);
      }
      break;
    case Framework::attn2:
      for (int t = 0; t < n; ++t) {
        s.gamma[t] = std::pow(1.0 - inv_n, t);
        s.alpha[t] = profile.ratio(s.gamma[t]);
      }
      break;
    case Framework::attn3:
      s.gamma[0] = 1.0;
      for (int t = 0; t < n; ++t) {
        s.alpha[t] = profile.ratio(s.gamma[t]);
        if (t + 1 < n) s.gamma[t + 1] = s.gamma[t] * (1.0 - s.alpha[t] * inv_n);
      }
      break;
  }
  return s;
}

std::size_t sample_size(double epsilon, double delta, double beta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("sample_size: epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("sample_size: delta must lie in (0,1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("sample_size: beta must lie in (0,1]");
  return static_cast<std::size_t>(std::ceil(6.0 / (epsilon * epsilon * beta) * std::log(2.0 / delta)));
}

std::size_t default_sample_size(double epsilon, int n) {
  return sample_size(epsilon, epsilon / (2.0 * n), std::exp(-1.0));
}

AttenuationTable schedule_table(const Instance& instance, const BlackBoxProfile& profile, Framework framework) {
  AttenuationTable table;
  table.framework = framework;
  table.horizon = instance.horizon;
  table.instance_digest = digest(instance);
  Schedule s = target_schedule(profile, instance.horizon, framework);
  table.gamma = std::move(s.gamma);
  table.alpha = std::move(s.alpha);
  return table;
}

void check_table(const AttenuationTable& table, const Instance& instance, Framework framework, bool require_sigma) {
  const auto n = static_cast<std::size_t>(instance.horizon);
  if (table.framework != framework) {
    throw std::invalid_argument(fmt::format("table is for {}, not {}", to_string(table.framework), to_string(framework)));
  }
  if (table.horizon != instance.horizon || table.gamma.size() != n || table.alpha.size() != n) {
    throw std::invalid_argument("table horizon does not match the instance");
  }
  if (!table.instance_digest.empty() && table.instance_digest != digest(instance)) {
    throw std::invalid_argument("table was calibrated for a different instance");
  }
  if (!table.sigma.empty()) {
    if (table.sigma.size() != n) throw std::invalid_argument("table sigma has the wrong number of rounds");
    for (const auto& row : table.sigma) {
      if (row.size() != instance.offline.size()) throw std::invalid_argument("table sigma has the wrong width");
      for (double s : row) {
        if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("table sigma outside [0,1]");
      }
    }
  }
  if (require_sigma && framework != Framework::attn1 && table.sigma.empty()) {
    throw std::invalid_argument(fmt::format("{} needs a calibrated vertex table", to_string(framework)));
  }
}

json to_json(const AttenuationTable& table) {
  json warnings = json::array();
  for (const auto& w : table.warnings) {
    warnings.push_back({{"round", w.round}, {"u", w.offline}, {"estimate", w.estimate}, {"target", w.target}});
  }
  return {{"framework", to_string(table.framework)},
          {"n", table.horizon},
          {"instance_digest", table.instance_digest},
          {"gamma", table.gamma},
          {"alpha", table.alpha},
          {"sigma", table.sigma},
          {"calibration_meta",
           {{"samples", table.meta.samples},
            {"epsilon", table.meta.epsilon},
            {"seed", table.meta.seed},
            {"inner_trials", table.meta.inner_trials}}},
          {"warnings", warnings}};
}

AttenuationTable table_from_json(const json& doc) {
  try {
    AttenuationTable t;
    t.framework = framework_from_string(doc.at("framework").get<std::string>());
    t.horizon = doc.at("n").get<int>();
    t.instance_digest = doc.value("instance_digest", std::string{});
    t.gamma = doc.at("gamma").get<std::vector<double>>();
    t.alpha = doc.at("alpha").get<std::vector<double>>();
    t.sigma = doc.at("sigma").get<std::vector<std::vector<double>>>();
    const auto& meta = doc.at("calibration_meta");
    t.meta = {meta.at("samples").get<std::size_t>(), meta.at("epsilon").get<double>(),
              meta.at("seed").get<std::uint64_t>(), meta.at("inner_trials").get<std::size_t>()};
    for (const auto& w : doc.value("warnings", json::array())) {
      t.warnings.push_back({w.at("round").get<int>(), w.at("u").get<std::size_t>(), w.at("estimate").get<double>(),
                            w.at("target").get<double>()});
    }
    return t;
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed attenuation table: ") + err.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::size_t>& key) const {
    std::uint64_t h = 0x51ed270b27a4e3c1ULL;
    for (std::size_t id : key) h = mix64(h ^ id);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

struct StarEstimateCache::Impl {
  mutable std::shared_mutex mutex;
  std::unordered_map<std::vector<std::size_t>, std::shared_ptr<const std::vector<double>>, KeyHash> entries;
};

StarEstimateCache::StarEstimateCache(std::uint64_t seed, std::size_t inner_trials, std::size_t max_entries)
    : seed_(seed), inner_trials_(inner_trials), max_entries_(max_entries), impl_(std::make_unique<Impl>()) {
  if (inner_trials == 0) throw std::invalid_argument("StarEstimateCache: inner_trials must be >= 1");
}

StarEstimateCache::~StarEstimateCache() = default;

std::size_t StarEstimateCache::size() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->entries.size();
}

std::shared_ptr<const std::vector<double>> StarEstimateCache::probe_probs(const BlackBox& box, const StarProblem& star) {
  std::vector<std::size_t> key(star.edges.size());
  std::transform(star.edges.begin(), star.edges.end(), key.begin(), [](const StarEdge& e) { return e.edge; });
  {
    std::shared_lock lock(impl_->mutex);
    auto it = impl_->entries.find(key);
    if (it != impl_->entries.end()) return it->second;
  }
  const std::uint64_t stream = derive_seed(seed_, {static_cast<std::uint64_t>(KeyHash{}(key))});
  auto estimates = estimate_probe_probs(box, star, inner_trials_, stream, Execution::serial);
  auto probs = std::make_shared<std::vector<double>>(estimates.size());
  std::transform(estimates.begin(), estimates.end(), probs->begin(), [](const ProbeEstimate& p) { return p.mean; });

  std::unique_lock lock(impl_->mutex);
  if (impl_->entries.size() >= max_entries_) return probs;
  return impl_->entries.emplace(std::move(key), std::move(probs)).first->second;
}

std::vector<double> factors_from_probe_probs(const StarProblem& star, std::span<const double> probe_probs,
                                             double alpha_target, double min_g) {
  if (probe_probs.size() != star.edges.size()) throw std::invalid_argument("factors_from_probe_probs: size mismatch");
  std::vector<double> factors(star.edges.size(), 1.0);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double g = star.edges[i].g;
    if (g < min_g || probe_probs[i] <= 0.0) continue;
    factors[i] = std::clamp(alpha_target * g / probe_probs[i], 0.0, 1.0);
  }
  return factors;
}

std::vector<double> edge_factors_for_round(const BlackBox& box, const StarProblem& star, double alpha_target,
                                           std::size_t inner_trials, std::uint64_t seed, double min_g) {
  const auto estimates = estimate_probe_probs(box, star, inner_trials, seed, Execution::serial);
  std::vector<double> probs(estimates.size());
  std::transform(estimates.begin(), estimates.end(), probs.begin(), [](const ProbeEstimate& p) { return p.mean; });
  return factors_from_probe_probs(star, probs, alpha_target, min_g);
}

AttenuationTable calibrate_vertex_sigma(const Instance& instance, const LpSolution& lp, const BlackBox& box,
                                        Framework framework, const CalibrationOptions& options) {
  if (framework == Framework::attn1) throw std::invalid_argument("calibrate_vertex_sigma: attn1 uses no vertex attenuation");
  const int n = instance.horizon;
  const std::size_t m = instance.offline.size();
  const std::size_t samples = options.samples ? options.samples : default_sample_size(options.epsilon, n);

  AttenuationTable table = schedule_table(instance, box.profile(), framework);
  table.sigma.assign(static_cast<std::size_t>(n), std::vector<double>(m, 1.0));
  table.meta = {samples, options.epsilon, options.seed, options.inner_trials};

  auto cache = options.cache ? options.cache
                             : std::make_shared<StarEstimateCache>(derive_seed(options.seed, {0xcac4e}), options.inner_trials);
  const OnlineSimulator sim(instance, lp, box, table, cache, {false, options.epsilon});

  std::vector<std::uint8_t> survived(samples * m);
  for (int t = 2; t <= n; ++t) {
    // Rows of `table.sigma` for rounds < t are frozen; round t is still all ones.
    for_each_index(samples, options.exec, [&](std::size_t i) {
      Rng rng = make_stream(options.seed, {static_cast<std::uint64_t>(t), i});
      RunState state = sim.initial_state();
      while (state.round < t) {
        sim.attenuate(state, rng);
        sim.play_round(state, rng, nullptr);
      }
      std::copy(state.safe.begin(), state.safe.end(), survived.begin() + static_cast<std::ptrdiff_t>(i * m));
    });

    const double target = table.gamma[static_cast<std::size_t>(t - 1)];
    for (std::size_t u = 0; u < m; ++u) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < samples; ++i) count += survived[i * m + u];
      const double beta = static_cast<double>(count) / static_cast<double>(samples);
      if (beta < target - options.epsilon) table.warnings.push_back({t, u, beta, target});
      table.sigma[static_cast<std::size_t>(t - 1)][u] = beta > target ? target / beta : 1.0;
    }
  }
  return table;
}

}  // namespace stomatch
