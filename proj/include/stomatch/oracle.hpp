#pragma once

#include <cstddef>
#include <vector>

#include "stomatch/instance.hpp"

namespace stomatch {

struct PolicyValue {
  double expected_weight = 0.0;
  std::size_t state_count = 0;
};

inline constexpr std::size_t kDpStateLimit = 10'000'000;

/// Exact value of the optimal online probing policy by backward induction
/// over (round, remaining budget of each offline vertex; 0 = gone). The
/// arrival is marginalized exactly and the probing within a round is
/// optimized over every adaptive order and stopping rule. Offline budgets
/// are t_u when `two_sided`, otherwise unlimited. Throws std::length_error
/// when the state space exceeds `state_limit`.
PolicyValue optimal_online_dp(const Instance& instance, bool two_sided = false,
                              std::size_t state_limit = kDpStateLimit);

inline constexpr std::size_t kExactStarMaxEdges = 5;

/// Exact probe probability of each star edge under dependent rounding plus
/// a uniform probe order, by enumerating the rounding's branches (lowest
/// fractional pair first) and every order of the rounded set. Throws
/// std::length_error above kExactStarMaxEdges edges.
std::vector<double> exact_star_probe_probs(const StarProblem& star);

}  // namespace stomatch
