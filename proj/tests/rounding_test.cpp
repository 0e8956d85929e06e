#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stomatch/rounding.hpp"

using namespace stomatch;
using stomatch::testing::make_star;
using stomatch::testing::random_star;

TEST(Rounding, IntegralVectorIsKept) {
  const StarProblem star = make_star(3, {{0.2, 1.0}, {0.3, 0.0}, {0.1, 1.0}});
  Rng rng = make_stream(1, {});
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(round_star(star, rng).chosen, (std::vector<std::size_t>{0, 2}));
  }
}

TEST(Rounding, RejectsInfeasibleStar) {
  Rng rng = make_stream(1, {});
  EXPECT_THROW(round_star(make_star(1, {{0.1, 0.8}, {0.1, 0.8}}), rng), std::invalid_argument);
}

TEST(Rounding, SingleFractionalEdgeIsBernoulli) {
  const StarProblem star = make_star(1, {{0.5, 0.3}});
  Rng rng = make_stream(2, {});
  const int trials = 40000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += static_cast<int>(round_star(star, rng).chosen.size());
  const double sigma = std::sqrt(0.3 * 0.7 / trials);
  EXPECT_NEAR(hits / static_cast<double>(trials), 0.3, 4 * sigma);
}

TEST(Rounding, MarginalsDegreeAndNegativeCorrelation) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const StarProblem star = random_star(s, 4 + s % 3);
    const std::size_t k = star.edges.size();
    const double mass = star.mass();
    Rng rng = make_stream(100 + s, {});
    const int trials = 20000;
    std::vector<double> single(k, 0.0);
    std::vector<double> pair(k * k, 0.0);
    for (int i = 0; i < trials; ++i) {
      const auto chosen = round_star(star, rng).chosen;
      const double c = static_cast<double>(chosen.size());
      ASSERT_TRUE(c == std::floor(mass + 1e-9) || c == std::ceil(mass - 1e-9)) << c << " vs " << mass;
      for (std::size_t a : chosen) {
        single[a] += 1;
        for (std::size_t b : chosen) pair[a * k + b] += 1;
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      const double g = star.edges[a].g;
      EXPECT_NEAR(single[a] / trials, g, 4 * std::sqrt(g * (1 - g) / trials) + 1e-12);
      for (std::size_t b = a + 1; b < k; ++b) {
        const double prod = star.edges[a].g * star.edges[b].g;
        const double both = pair[a * k + b] / trials;
        EXPECT_LE(both, prod + 4 * std::sqrt(prod * (1 - prod) / trials) + 1e-12);
      }
    }
  }
}

TEST(Rounding, SameStreamSameResult) {
  const StarProblem star = random_star(7, 6);
  Rng a = make_stream(9, {1}), b = make_stream(9, {1});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(round_star(star, a).chosen, round_star(star, b).chosen);
}
