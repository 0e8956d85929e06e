#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stomatch/lp.hpp"
#include "stomatch/oracle.hpp"

using namespace stomatch;
using stomatch::testing::make_instance;
using stomatch::testing::make_star;

TEST(Dp, SingleEdgeOneRound) {
  EXPECT_NEAR(optimal_online_dp(stomatch::testing::single_offline(1, 0.5)).expected_weight, 0.5, 1e-15);
}

TEST(Dp, TwoChancesAtOneVertex) {
  // Two unit-rate types, only the first joined to u: each round succeeds w.p. 1/4.
  const Instance inst = make_instance(2, {2}, {{1, 1.0}, {1, 1.0}}, {{0, 0, 0.5, 1.0}});
  EXPECT_NEAR(optimal_online_dp(inst).expected_weight, 0.4375, 1e-15);
  EXPECT_NEAR(optimal_online_dp(stomatch::testing::single_offline(2, 0.5)).expected_weight, 0.75, 1e-15);
}

TEST(Dp, OfflineTimeoutsOnlyInTwoSidedMode) {
  const Instance inst = make_instance(2, {1}, {{1, 1.0}, {1, 1.0}}, {{0, 0, 0.5, 1.0}});
  EXPECT_NEAR(optimal_online_dp(inst, false).expected_weight, 0.4375, 1e-15);
  // t_u = 1: a failed first probe removes u, so 1/2 * 1/2 + 1/2 * 1/4.
  EXPECT_NEAR(optimal_online_dp(inst, true).expected_weight, 0.375, 1e-15);
}

TEST(Dp, OptimalProbeOrder) {
  // One arrival with patience 1: probe the better of w p = 0.9 and 0.5.
  const Instance inst = make_instance(1, {1, 1}, {{1, 1.0}}, {{0, 0, 0.9, 1.0}, {1, 0, 1.0, 0.5}});
  EXPECT_NEAR(optimal_online_dp(inst).expected_weight, 0.9, 1e-15);
  // Patience 2: probe the risky edge first, fall back to the certain one.
  const Instance wide = make_instance(1, {1, 1}, {{2, 1.0}}, {{0, 0, 0.9, 1.0}, {1, 0, 1.0, 0.5}});
  EXPECT_NEAR(optimal_online_dp(wide).expected_weight, 0.9 + 0.1 * 0.5, 1e-15);
}

TEST(Dp, BoundedByLp) {
  EXPECT_LE(optimal_online_dp(gap_instance(2)).expected_weight, 2.0);
  RandomInstanceSpec spec;
  spec.num_offline = 3;
  spec.num_online = 4;
  spec.offline_timeout = 2;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = random_instance(seed, spec);
    for (bool two_sided : {false, true}) {
      const auto dp = optimal_online_dp(inst, two_sided);
      EXPECT_LE(dp.expected_weight, solve_benchmark(inst, !two_sided).objective + 1e-7) << seed;
      EXPECT_GE(dp.expected_weight, 0.0);
    }
  }
}

TEST(Dp, StateLimit) {
  EXPECT_THROW(optimal_online_dp(gap_instance(12), true, 1000), std::length_error);
}

TEST(ExactStar, Examples) {
  const auto certain = exact_star_probe_probs(make_star(2, {{1.0, 1.0}, {1.0, 1.0}}));
  EXPECT_NEAR(certain[0], 0.5, 1e-15);
  EXPECT_NEAR(certain[1], 0.5, 1e-15);
  for (double p : {0.1, 0.5, 1.0}) EXPECT_NEAR(exact_star_probe_probs(make_star(1, {{p, 1.0}}))[0], 1.0, 1e-15);
  const auto halves = exact_star_probe_probs(make_star(2, {{0.5, 1.0}, {0.5, 1.0}}));
  EXPECT_NEAR(halves[0], 0.75, 1e-15);
  EXPECT_NEAR(halves[1], 0.75, 1e-15);
}

TEST(ExactStar, FractionalMarginalsRespectPropertyC) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const StarProblem star = stomatch::testing::random_star(s, 1 + s % 5);
    const auto probs = exact_star_probe_probs(star);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double g = star.edges[i].g;
      EXPECT_LE(probs[i], g + 1e-12);
      EXPECT_GE(probs[i], (1.0 - competition(star, i) / 2.0) * g - 1e-12);
    }
  }
}

TEST(ExactStar, SizeLimit) {
  EXPECT_THROW(exact_star_probe_probs(stomatch::testing::random_star(1, 6)), std::length_error);
}
