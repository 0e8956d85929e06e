#pragma once

#include <vector>

#include "stomatch/instance.hpp"
#include "stomatch/random.hpp"

namespace stomatch {

/// Outcome of dependent rounding on a star: positions (into
/// StarProblem::edges, ascending) of the edges rounded to 1.
struct RoundedStar {
  std::vector<std::size_t> chosen;
};

/// Values within this distance of 0 or 1 are treated as integral.
inline constexpr double kSnapEps = 1e-12;

/// Dependent rounding on the star. Each edge is chosen with probability g_e,
/// the number chosen is floor or ceil of sum g, and the chosen indicators
/// are negatively correlated.
///
/// The two lowest-indexed fractional edges are paired repeatedly; one step
/// moves mass between them so that at least one becomes integral, keeping
/// their sum and both expectations fixed. A final lone fractional edge is
/// settled by an independent coin. Throws std::invalid_argument for an
/// infeasible star.
RoundedStar round_star(const StarProblem& star, Rng& rng);

}  // namespace stomatch
