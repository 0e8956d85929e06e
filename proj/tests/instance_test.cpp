#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stomatch/instance.hpp"

using namespace stomatch;
using stomatch::testing::make_instance;

TEST(Instance, GapInstancesAreValid) {
  for (int n = 1; n <= 100; ++n) {
    const Instance inst = gap_instance(n);
    EXPECT_TRUE(validate(inst).empty()) << n;
    EXPECT_EQ(inst.edges.size(), static_cast<std::size_t>(n * n));
    EXPECT_EQ(inst.edges_at_online(0).size(), static_cast<std::size_t>(n));
  }
  EXPECT_THROW(gap_instance(0), std::invalid_argument);
}

TEST(Instance, RandomInstancesAreValidOverManySeeds) {
  RandomInstanceSpec integral;
  integral.num_offline = 4;
  integral.num_online = 5;
  integral.density = 0.6;
  RandomInstanceSpec fractional = integral;
  fractional.rate_mode = RateMode::fractional;
  fractional.num_online = 7;
  fractional.horizon = 5;
  fractional.offline_timeout = 2;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const auto* spec : {&integral, &fractional}) {
      Instance inst;
      try {
        inst = random_instance(seed, *spec);
      } catch (const std::invalid_argument&) {
        continue;  // empty edge draw
      }
      const auto violations = validate(inst);
      ASSERT_TRUE(violations.empty()) << seed << ": " << violations.front().message;
    }
  }
}

TEST(Instance, RandomInstanceIsDeterministic) {
  RandomInstanceSpec spec;
  EXPECT_EQ(random_instance(42, spec), random_instance(42, spec));
  EXPECT_EQ(digest(random_instance(42, spec)), digest(random_instance(42, spec)));
}

TEST(Instance, RandomInstanceRejectsBadSizes) {
  RandomInstanceSpec spec;
  spec.num_offline = 0;
  EXPECT_THROW(random_instance(1, spec), std::invalid_argument);
  spec = {};
  spec.num_online = 2;
  spec.horizon = 4;
  EXPECT_THROW(random_instance(1, spec), std::invalid_argument);
}

TEST(Instance, JsonRoundTrip) {
  RandomInstanceSpec spec;
  spec.rate_mode = RateMode::fractional;
  spec.num_online = 6;
  spec.horizon = 4;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance(seed, spec);
    const Instance back = instance_from_json(nlohmann::json::parse(to_json(inst).dump()));
    EXPECT_EQ(inst, back);
    EXPECT_EQ(digest(inst), digest(back));
    EXPECT_EQ(digest(inst).size(), 16u);
  }
}

TEST(Instance, JsonRejectsMissingKeys) {
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"n": 1, "offline": []})")), std::invalid_argument);
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"n": "x", "offline": [], "online": [], "edges": []})")),
               std::invalid_argument);
}

TEST(Instance, ValidateReportsRateSum) {
  const Instance inst = make_instance(2, {1}, {{1, 1.0}}, {{0, 0, 0.5, 1.0}});
  const auto v = validate(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "online.r");
  EXPECT_NE(v[0].message.find("sum of r_v = 1 != n = 2"), std::string::npos) << v[0].message;
}

TEST(Instance, ValidateReportsProbabilityRange) {
  const Instance inst = make_instance(1, {1}, {{1, 1.0}}, {{0, 0, 1.5, 1.0}});
  const auto v = validate(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "edges.p");
  EXPECT_NE(v[0].message.find("p_e = 1.5 out of [0,1]"), std::string::npos) << v[0].message;
}

TEST(Instance, ValidateReportsStructuralProblems) {
  Instance inst = make_instance(1, {0, 1}, {{0, 1.0}}, {{0, 0, 0.5, 1.0}, {0, 0, 0.5, 1.0}, {7, 0, 0.5, 1.0}});
  inst.offline[1].id = 0;
  inst.finalize();
  std::set<std::string> fields;
  for (const auto& v : validate(inst)) fields.insert(v.field);
  EXPECT_TRUE(fields.count("offline"));
  EXPECT_TRUE(fields.count("offline.t"));
  EXPECT_TRUE(fields.count("online.t"));
  EXPECT_TRUE(fields.count("edges"));
  EXPECT_TRUE(fields.count("edges.u"));
}

TEST(Star, FeasibilityAndJson) {
  const StarProblem ok = stomatch::testing::make_star(2, {{0.5, 1.0}, {0.5, 1.0}});
  EXPECT_TRUE(is_feasible(ok));
  EXPECT_DOUBLE_EQ(ok.mass(), 2.0);
  EXPECT_DOUBLE_EQ(ok.matching_mass(), 1.0);
  EXPECT_FALSE(is_feasible(stomatch::testing::make_star(1, {{0.5, 1.0}, {0.5, 1.0}})));
  EXPECT_FALSE(is_feasible(stomatch::testing::make_star(2, {{1.0, 1.0}, {1.0, 0.5}})));
  EXPECT_FALSE(is_feasible(stomatch::testing::make_star(2, {{0.1, 1.2}})));
  const StarProblem back = star_from_json(to_json(ok));
  ASSERT_EQ(back.edges.size(), 2u);
  EXPECT_EQ(back.patience, 2);
  EXPECT_DOUBLE_EQ(back.edges[1].prob, 0.5);
}
