#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace stomatch {

/// Offline vertex (item). `timeout` bounds probes across all rounds in the
/// two-sided model and is ignored otherwise.
struct OfflineVertex {
  int id = 0;
  int timeout = 1;
};

/// Online vertex type (buyer profile). `rate` is the expected number of
/// arrivals over the horizon; each round draws type v with probability rate/n.
struct OnlineType {
  int id = 0;
  int timeout = 1;
  double rate = 1.0;
};

struct Edge {
  int offline = 0;  // OfflineVertex::id
  int online = 0;   // OnlineType::id
  double prob = 0.0;
  double weight = 0.0;
};

/// Bipartite stochastic graph with timeouts and arrival rates.
///
/// Vertex ids are the ids carried in the input; edges reference them by id.
/// Internally everything else indexes by position: edge e is `edges[e]`,
/// `offline_of(e)` / `online_of(e)` give the vertex positions. The index
/// tables are built by `finalize()`, which the generators and the JSON
/// loader call; an instance is not mutated after that.
class Instance {
 public:
  int horizon = 1;
  std::vector<OfflineVertex> offline;
  std::vector<OnlineType> online;
  std::vector<Edge> edges;

  /// Rebuilds the position tables. Edges whose endpoints are unknown are
  /// left out of the adjacency lists (validate() reports them).
  void finalize();

  std::size_t offline_of(std::size_t e) const { return edge_offline_[e]; }
  std::size_t online_of(std::size_t e) const { return edge_online_[e]; }
  const std::vector<std::size_t>& edges_at_offline(std::size_t u) const { return offline_adj_[u]; }
  const std::vector<std::size_t>& edges_at_online(std::size_t v) const { return online_adj_[v]; }
  std::optional<std::size_t> offline_index(int id) const;
  std::optional<std::size_t> online_index(int id) const;

  bool operator==(const Instance& other) const;

 private:
  std::vector<std::size_t> edge_offline_, edge_online_;
  std::vector<std::vector<std::size_t>> offline_adj_, online_adj_;
};

struct Violation {
  std::string field;
  std::string message;
};

/// Absolute tolerance for the arrival-rate sum.
inline constexpr double kRateSumTolerance = 1e-9;

/// Checks every structural invariant. An empty result means the instance is
/// valid. Violations are data; this never throws.
std::vector<Violation> validate(const Instance& instance);

/// Complete n x n graph with p = 1/n, unit weights, timeouts n and unit
/// rates. Its LP optimum is n while no online algorithm beats (1 - 1/e) n.
Instance gap_instance(int n);

enum class RateMode { integral, fractional };

struct RandomInstanceSpec {
  int num_offline = 3;
  int num_online = 3;
  /// Horizon. Integral mode requires num_online == horizon; fractional
  /// mode requires num_online >= horizon. 0 means "num_online".
  int horizon = 0;
  double density = 1.0;
  RateMode rate_mode = RateMode::integral;
  int max_online_timeout = 3;
  /// Offline timeout; 0 means "horizon" (no effective limit).
  int offline_timeout = 0;
  double min_prob = 0.05;
  double max_prob = 1.0;
  double min_weight = 0.5;
  double max_weight = 2.0;
};

/// Deterministic random instance. Throws std::invalid_argument on bad sizes
/// or when no edge survives the density draw.
Instance random_instance(std::uint64_t seed, const RandomInstanceSpec& spec);

nlohmann::json to_json(const Instance& instance);
/// Parses the on-disk format. Throws std::invalid_argument on malformed
/// documents; semantic checks are left to validate().
Instance instance_from_json(const nlohmann::json& doc);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string digest(const Instance& instance);

// ---------------------------------------------------------------------------

/// One edge of a star: position `edge` in the owning instance (or a caller
/// chosen label for standalone stars), success probability and fractional
/// value g.
struct StarEdge {
  std::size_t edge = 0;
  double prob = 0.0;
  double g = 0.0;
};

/// The star graph G(v) of an arriving type with a fractional vector g, the
/// input of every offline black box. Feasible when
/// sum g*p <= 1, sum g <= patience and 0 <= g <= 1.
struct StarProblem {
  std::size_t center = 0;
  int patience = 1;
  std::vector<StarEdge> edges;

  double mass() const;           // sum g
  double matching_mass() const;  // sum g*p
};

inline constexpr double kStarTolerance = 1e-7;

bool is_feasible(const StarProblem& star, double tol = kStarTolerance);

/// Star file format: {"t": patience, "edges": [{"id", "p", "g"}, ...]}.
nlohmann::json to_json(const StarProblem& star);
StarProblem star_from_json(const nlohmann::json& doc);

}  // namespace stomatch
