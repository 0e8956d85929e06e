#include "stomatch/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "stomatch/random.hpp"

namespace stomatch {

using nlohmann::json;

void Instance::finalize() {
  std::map<int, std::size_t> off_pos, on_pos;
  for (std::size_t i = 0; i < offline.size(); ++i) off_pos.emplace(offline[i].id, i);
  for (std::size_t i = 0; i < online.size(); ++i) on_pos.emplace(online[i].id, i);

  edge_offline_.assign(edges.size(), 0);
  edge_online_.assign(edges.size(), 0);
  offline_adj_.assign(offline.size(), {});
  online_adj_.assign(online.size(), {});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto u = off_pos.find(edges[e].offline);
    auto v = on_pos.find(edges[e].online);
    if (u == off_pos.end() || v == on_pos.end()) continue;
    edge_offline_[e] = u->second;
    edge_online_[e] = v->second;
    offline_adj_[u->second].push_back(e);
    online_adj_[v->second].push_back(e);
  }
}

std::optional<std::size_t> Instance::offline_index(int id) const {
  for (std::size_t i = 0; i < offline.size(); ++i) {
    if (offline[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Instance::online_index(int id) const {
  for (std::size_t i = 0; i < online.size(); ++i) {
    if (online[i].id == id) return i;
  }
  return std::nullopt;
}

bool Instance::operator==(const Instance& other) const {
  auto same_off = [](const OfflineVertex& a, const OfflineVertex& b) {
    return a.id == b.id && a.timeout == b.timeout;
  };
  auto same_on = [](const OnlineType& a, const OnlineType& b) {
    return a.id == b.id && a.timeout == b.timeout && a.rate == b.rate;
  };
  auto same_edge = [](const Edge& a, const Edge& b) {
    return a.offline == b.offline && a.online == b.online && a.prob == b.prob && a.weight == b.weight;
  };
  return horizon == other.horizon &&
         std::equal(offline.begin(), offline.end(), other.offline.begin(), other.offline.end(), same_off) &&
         std::equal(online.begin(), online.end(), other.online.begin(), other.online.end(), same_on) &&
         std::equal(edges.begin(), edges.end(), other.edges.begin(), other.edges.end(), same_edge);
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto report = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  if (inst.horizon < 1) report("n", fmt::format("horizon {} < 1", inst.horizon));

  std::set<int> off_ids, on_ids;
  for (const auto& u : inst.offline) {
    if (!off_ids.insert(u.id).second) report("offline", fmt::format("duplicate offline id {}", u.id));
    if (u.timeout < 1) report("offline.t", fmt::format("t_u = {} < 1 for u={}", u.timeout, u.id));
  }
  double rate_sum = 0.0;
  for (const auto& v : inst.online) {
    if (!on_ids.insert(v.id).second) report("online", fmt::format("duplicate online id {}", v.id));
    if (v.timeout < 1) report("online.t", fmt::format("t_v = {} < 1 for v={}", v.timeout, v.id));
    if (!(v.rate > 0.0 && v.rate <= 1.0)) {
      report("online.r", fmt::format("r_v = {} out of (0,1] for v={}", v.rate, v.id));
    }
    rate_sum += v.rate;
  }
  if (std::abs(rate_sum - inst.horizon) > kRateSumTolerance) {
    report("online.r", fmt::format("sum of r_v = {} != n = {}", rate_sum, inst.horizon));
  }

  std::set<std::pair<int, int>> pairs;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const auto& ed = inst.edges[e];
    if (!off_ids.count(ed.offline)) report("edges.u", fmt::format("edge {} references unknown offline id {}", e, ed.offline));
    if (!on_ids.count(ed.online)) report("edges.v", fmt::format("edge {} references unknown online id {}", e, ed.online));
    if (!(ed.prob >= 0.0 && ed.prob <= 1.0)) report("edges.p", fmt::format("p_e = {} out of [0,1] for edge {}", ed.prob, e));
    if (!(ed.weight >= 0.0)) report("edges.w", fmt::format("w_e = {} < 0 for edge {}", ed.weight, e));
    if (!pairs.emplace(ed.offline, ed.online).second) {
      report("edges", fmt::format("duplicate edge ({}, {})", ed.offline, ed.online));
    }
  }
  return out;
}

Instance gap_instance(int n) {
  if (n < 1) throw std::invalid_argument("gap_instance: n must be >= 1");
  Instance inst;
  inst.horizon = n;
  for (int i = 0; i < n; ++i) {
    inst.offline.push_back({i, n});
    inst.online.push_back({i, n, 1.0});
  }
  const double p = 1.0 / n;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) inst.edges.push_back({u, v, p, 1.0});
  }
  inst.finalize();
  return inst;
}

namespace {

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Scales positive weights to sum to `total` with every entry capped at 1.
std::vector<double> capped_rates(std::vector<double> raw, int total) {
  std::vector<bool> capped(raw.size(), false);
  for (;;) {
    double free_target = total;
    double free_sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (capped[i]) free_target -= 1.0; else free_sum += raw[i];
    }
    bool changed = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (capped[i]) continue;
      raw[i] *= free_target / free_sum;
      if (raw[i] >= 1.0) {
        raw[i] = 1.0;
        capped[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // Push the float residue onto the largest uncapped entry.
  double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  std::size_t fix = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!capped[i] && (capped[fix] || raw[i] > raw[fix])) fix = i;
  }
  raw[fix] = std::min(1.0, raw[fix] + (total - sum));
  return raw;
}

}  // namespace

Instance random_instance(std::uint64_t seed, const RandomInstanceSpec& spec) {
  const int horizon = spec.horizon == 0 ? spec.num_online : spec.horizon;
  if (spec.num_offline < 1 || spec.num_online < 1 || horizon < 1) {
    throw std::invalid_argument("random_instance: sizes must be positive");
  }
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("random_instance: density must lie in (0,1]");
  }
  if (spec.rate_mode == RateMode::integral && spec.num_online != horizon) {
    throw std::invalid_argument("random_instance: integral rates need num_online == horizon");
  }
  if (spec.rate_mode == RateMode::fractional && spec.num_online < horizon) {
    throw std::invalid_argument("random_instance: fractional rates need num_online >= horizon");
  }
  if (spec.max_online_timeout < 1 || spec.offline_timeout < 0) {
    throw std::invalid_argument("random_instance: timeouts must be positive");
  }

  Rng rng(derive_seed(seed, {0x1a57a4ceULL}));
  Instance inst;
  inst.horizon = horizon;
  const int t_u = spec.offline_timeout == 0 ? horizon : spec.offline_timeout;
  for (int u = 0; u < spec.num_offline; ++u) inst.offline.push_back({u, t_u});

  std::vector<double> rates(spec.num_online, 1.0);
  if (spec.rate_mode == RateMode::fractional) {
    for (auto& r : rates) r = uniform_in(rng, 0.2, 1.0);
    rates = capped_rates(std::move(rates), horizon);
  }
  for (int v = 0; v < spec.num_online; ++v) {
    const int t_v = 1 + static_cast<int>(uniform_index(rng, spec.max_online_timeout));
    inst.online.push_back({v, t_v, rates[v]});
  }

  for (int u = 0; u < spec.num_offline; ++u) {
    for (int v = 0; v < spec.num_online; ++v) {
      const bool keep = uniform01(rng) < spec.density;
      const double p = uniform_in(rng, spec.min_prob, spec.max_prob);
      const double w = uniform_in(rng, spec.min_weight, spec.max_weight);
      if (keep) inst.edges.push_back({u, v, p, w});
    }
  }
  if (inst.edges.empty()) {
    throw std::invalid_argument("random_instance: density produced an empty edge set");
  }
  inst.finalize();
  return inst;
}

json to_json(const Instance& inst) {
  json off = json::array(), on = json::array(), edges = json::array();
  for (const auto& u : inst.offline) off.push_back({{"id", u.id}, {"t", u.timeout}});
  for (const auto& v : inst.online) on.push_back({{"id", v.id}, {"t", v.timeout}, {"r", v.rate}});
  for (const auto& e : inst.edges) {
    edges.push_back({{"u", e.offline}, {"v", e.online}, {"p", e.prob}, {"w", e.weight}});
  }
  return {{"n", inst.horizon}, {"offline", off}, {"online", on}, {"edges", edges}};
}

namespace {

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw std::invalid_argument(fmt::format("missing key '{}'", key));
  }
  return obj.at(key);
}

int int_field(const json& obj, const char* key) {
  const auto& f = field(obj, key);
  if (!f.is_number_integer()) throw std::invalid_argument(fmt::format("key '{}' must be an integer", key));
  return f.get<int>();
}

double real_field(const json& obj, const char* key) {
  const auto& f = field(obj, key);
  if (!f.is_number()) throw std::invalid_argument(fmt::format("key '{}' must be a number", key));
  return f.get<double>();
}

const json& array_field(const json& obj, const char* key) {
  const auto& f = field(obj, key);
  if (!f.is_array()) throw std::invalid_argument(fmt::format("key '{}' must be an array", key));
  return f;
}

}  // namespace

Instance instance_from_json(const json& doc) {
  Instance inst;
  inst.horizon = int_field(doc, "n");
  for (const auto& u : array_field(doc, "offline")) inst.offline.push_back({int_field(u, "id"), int_field(u, "t")});
  for (const auto& v : array_field(doc, "online")) {
    inst.online.push_back({int_field(v, "id"), int_field(v, "t"), real_field(v, "r")});
  }
  for (const auto& e : array_field(doc, "edges")) {
    inst.edges.push_back({int_field(e, "u"), int_field(e, "v"), real_field(e, "p"), real_field(e, "w")});
  }
  inst.finalize();
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(path + ": " + err.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(instance).dump(2) << '\n';
}

std::string digest(const Instance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(instance).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

double StarProblem::mass() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.g;
  return s;
}

double StarProblem::matching_mass() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.g * e.prob;
  return s;
}

bool is_feasible(const StarProblem& star, double tol) {
  if (star.patience < 1) return false;
  for (const auto& e : star.edges) {
    if (e.g < -tol || e.g > 1.0 + tol || e.prob < 0.0 || e.prob > 1.0) return false;
  }
  return star.matching_mass() <= 1.0 + tol && star.mass() <= star.patience + tol;
}

json to_json(const StarProblem& star) {
  json edges = json::array();
  for (const auto& e : star.edges) edges.push_back({{"id", e.edge}, {"p", e.prob}, {"g", e.g}});
  return {{"t", star.patience}, {"edges", edges}};
}

StarProblem star_from_json(const json& doc) {
  StarProblem star;
  star.patience = int_field(doc, "t");
  for (const auto& e : array_field(doc, "edges")) {
    const int id = int_field(e, "id");
    if (id < 0) throw std::invalid_argument("star edge ids must be non-negative");
    star.edges.push_back({static_cast<std::size_t>(id), real_field(e, "p"), real_field(e, "g")});
  }
  return star;
}

}  // namespace stomatch
