#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "stomatch/instance.hpp"
#include "stomatch/random.hpp"

namespace stomatch::testing {

/// Bipartite instance from (u, v, p, w) tuples over ids 0..; every online
/// type gets `rates[v]`, online timeouts `tv`, offline timeouts `tu`.
struct EdgeSpec {
  int u, v;
  double p, w;
};

inline Instance make_instance(int n, std::vector<int> tu, std::vector<std::pair<int, double>> online,
                              const std::vector<EdgeSpec>& edges) {
  Instance inst;
  inst.horizon = n;
  for (std::size_t i = 0; i < tu.size(); ++i) inst.offline.push_back({static_cast<int>(i), tu[i]});
  for (std::size_t i = 0; i < online.size(); ++i) {
    inst.online.push_back({static_cast<int>(i), online[i].first, online[i].second});
  }
  for (const auto& e : edges) inst.edges.push_back({e.u, e.v, e.p, e.w});
  inst.finalize();
  return inst;
}

/// One offline vertex and n unit-rate online types, each joined to it by an
/// edge (p, w). For n = 1 this is the single-edge instance.
inline Instance single_offline(int n, double p, double w = 1.0) {
  std::vector<std::pair<int, double>> online(static_cast<std::size_t>(n), {1, 1.0});
  std::vector<EdgeSpec> edges;
  for (int v = 0; v < n; ++v) edges.push_back({0, v, p, w});
  return make_instance(n, {n}, online, edges);
}

/// Random feasible star with `k` edges: g scaled into the polytope.
inline StarProblem random_star(std::uint64_t seed, std::size_t k) {
  Rng rng = make_stream(seed, {0x57a7});
  StarProblem star;
  star.patience = 1 + static_cast<int>(uniform_index(rng, 3));
  for (std::size_t i = 0; i < k; ++i) {
    star.edges.push_back({i, 0.05 + 0.95 * uniform01(rng), uniform01(rng)});
  }
  double mass = 0.0, matching = 0.0;
  for (const auto& e : star.edges) {
    mass += e.g;
    matching += e.g * e.prob;
  }
  const double scale = std::min({1.0, star.patience / mass, 1.0 / matching}) * (0.6 + 0.4 * uniform01(rng));
  for (auto& e : star.edges) e.g *= scale;
  return star;
}

inline StarProblem make_star(int patience, const std::vector<std::pair<double, double>>& pg) {
  StarProblem star;
  star.patience = patience;
  for (std::size_t i = 0; i < pg.size(); ++i) star.edges.push_back({i, pg[i].first, pg[i].second});
  return star;
}

}  // namespace stomatch::testing
