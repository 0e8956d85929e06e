#include "stomatch/rounding.hpp"

#include <algorithm>
#include <stdexcept>

namespace stomatch {

namespace {

double snap(double x) {
  if (x < kSnapEps) return 0.0;
  if (x > 1.0 - kSnapEps) return 1.0;
  return x;
}

bool fractional(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

RoundedStar round_star(const StarProblem& star, Rng& rng) {
  if (!is_feasible(star)) throw std::invalid_argument("round_star: star is not feasible");

  std::vector<double> g(star.edges.size());
  std::transform(star.edges.begin(), star.edges.end(), g.begin(), [](const StarEdge& e) { return snap(e.g); });

  // `a` is the lowest fractional index; `b` scans forward for its partner.
  std::size_t a = 0;
  while (a < g.size() && !fractional(g[a])) ++a;
  std::size_t b = a + 1;
  for (;;) {
    while (b < g.size() && !fractional(g[b])) ++b;
    if (b >= g.size()) break;

    // Either raise a / lower b by up, or lower a / raise b by down.
    const double up = std::min(1.0 - g[a], g[b]);
    const double down = std::min(g[a], 1.0 - g[b]);
    if (uniform01(rng) * (up + down) < down) {
      g[a] += up;
      g[b] -= up;
    } else {
      g[a] -= down;
      g[b] += down;
    }
    g[a] = snap(g[a]);
    g[b] = snap(g[b]);

    if (!fractional(g[a])) {
      // b may still be fractional; it becomes the new anchor.
      a = fractional(g[b]) ? b : b + 1;
      while (a < g.size() && !fractional(g[a])) ++a;
      b = a + 1;
    } else {
      ++b;
    }
  }
  if (a < g.size() && fractional(g[a])) g[a] = uniform01(rng) < g[a] ? 1.0 : 0.0;

  RoundedStar out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 1.0) out.chosen.push_back(i);
  }
  return out;
}

}  // namespace stomatch
