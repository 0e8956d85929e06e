#include <algorithm>
#include <numeric>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stomatch/lp.hpp"

using namespace stomatch;
using stomatch::testing::make_instance;

namespace {

// Brute-force LP optimum: enumerate every basis of active constraints
// (rows of A x <= b plus x >= 0), keep the feasible vertices.
double vertex_enumeration_max(const DenseLp& lp) {
  const std::size_t n = lp.cols(), m = lp.rows();
  Eigen::MatrixXd all(m + n, n);
  Eigen::VectorXd rhs(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) all(i, j) = lp.matrix[i * n + j];
    rhs(i) = lp.rhs[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    all.row(m + j).setZero();
    all(m + j, j) = -1.0;
    rhs(m + j) = 0.0;
  }
  const Eigen::Map<const Eigen::VectorXd> c(lp.objective.data(), static_cast<Eigen::Index>(n));
  double best = -1.0;
  std::vector<bool> pick(m + n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0, r = 0; i < m + n; ++i) {
      if (!pick[i]) continue;
      a.row(static_cast<Eigen::Index>(r)) = all.row(static_cast<Eigen::Index>(i));
      b(static_cast<Eigen::Index>(r++)) = rhs(static_cast<Eigen::Index>(i));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(b);
    if (((all * x - rhs).array() > 1e-9).any()) continue;
    best = std::max(best, c.dot(x));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

DenseLp benchmark_as_dense(const Instance& inst, bool one_sided) {
  // Rebuilt from the row definitions so the oracle does not share code.
  DenseLp lp;
  const std::size_t m = inst.edges.size();
  for (const auto& e : inst.edges) lp.objective.push_back(e.prob * e.weight);
  std::vector<double> row(m);
  auto add = [&](auto pred, auto coef, double bound) {
    for (std::size_t e = 0; e < m; ++e) row[e] = pred(e) ? coef(e) : 0.0;
    lp.add_row(row, bound);
  };
  auto prob = [&](std::size_t e) { return inst.edges[e].prob; };
  auto one = [](std::size_t) { return 1.0; };
  for (std::size_t u = 0; u < inst.offline.size(); ++u) {
    auto at_u = [&](std::size_t e) { return inst.offline_of(e) == u; };
    add(at_u, prob, 1.0);
    add(at_u, one, one_sided ? inst.horizon : inst.offline[u].timeout);
  }
  for (std::size_t v = 0; v < inst.online.size(); ++v) {
    auto at_v = [&](std::size_t e) { return inst.online_of(e) == v; };
    const double r = inst.online[v].rate;
    add(at_v, prob, r);
    add(at_v, one, inst.online[v].timeout * r);
    for (std::size_t e = 0; e < m; ++e) {
      if (inst.online_of(e) == v) add([e](std::size_t k) { return k == e; }, one, r);
    }
  }
  return lp;
}

}  // namespace

TEST(DenseLp, TextbookProblem) {
  DenseLp lp;
  lp.objective = {3.0, 5.0};
  lp.add_row(std::vector<double>{1.0, 0.0}, 4.0);
  lp.add_row(std::vector<double>{0.0, 2.0}, 12.0);
  lp.add_row(std::vector<double>{3.0, 2.0}, 18.0);
  const auto res = solve_dense_lp(lp);
  EXPECT_NEAR(res.objective, 36.0, 1e-9);
  EXPECT_NEAR(res.primal[0], 2.0, 1e-9);
  EXPECT_NEAR(res.primal[1], 6.0, 1e-9);
  EXPECT_NEAR(res.dual_objective, 36.0, 1e-9);
}

TEST(DenseLp, Unbounded) {
  DenseLp lp;
  lp.objective = {1.0, 1.0};
  lp.add_row(std::vector<double>{1.0, -1.0}, 1.0);
  try {
    solve_dense_lp(lp);
    FAIL() << "expected LpError";
  } catch (const LpError& err) {
    EXPECT_EQ(err.status(), LpStatus::unbounded);
  }
}

TEST(Benchmark, SingleEdge) {
  const Instance inst = stomatch::testing::single_offline(1, 0.5);
  const auto lp = solve_benchmark(inst, true);
  EXPECT_NEAR(lp.objective, 0.5, 1e-12);
  EXPECT_NEAR(lp.flow[0], 1.0, 1e-12);
}

TEST(Benchmark, GapInstanceObjectiveIsN) {
  for (int n : {1, 2, 5, 10, 20}) {
    const auto lp = solve_benchmark(gap_instance(n), true);
    EXPECT_NEAR(lp.objective, n, 1e-9) << n;
    EXPECT_NEAR(lp.dual_objective, n, 1e-9) << n;
  }
}

TEST(Benchmark, ZeroProbabilityGivesZero) {
  const auto lp = solve_benchmark(stomatch::testing::single_offline(2, 0.0), true);
  EXPECT_EQ(lp.objective, 0.0);
}

TEST(Benchmark, MatchesVertexEnumerationOracle) {
  RandomInstanceSpec spec;
  spec.num_offline = 2;
  spec.num_online = 2;
  spec.density = 0.9;
  spec.offline_timeout = 1;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst;
    try {
      inst = random_instance(seed, spec);
    } catch (const std::invalid_argument&) {
      continue;
    }
    for (bool one_sided : {true, false}) {
      const auto lp = solve_benchmark(inst, one_sided);
      const double oracle = vertex_enumeration_max(benchmark_as_dense(inst, one_sided));
      EXPECT_NEAR(lp.objective, oracle, 1e-7) << "seed " << seed;
      EXPECT_NEAR(lp.dual_objective, lp.objective, 1e-7) << "seed " << seed;
      EXPECT_LE(max_violation(inst, lp, one_sided), 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(Benchmark, OfflineTimeoutsTighten) {
  // One offline vertex with t_u = 1 and two chances: two-sided LP caps sum f at 1.
  const Instance inst = make_instance(2, {1}, {{1, 1.0}, {1, 1.0}}, {{0, 0, 0.5, 1.0}, {0, 1, 0.5, 1.0}});
  EXPECT_NEAR(solve_benchmark(inst, true).objective, 1.0, 1e-12);
  EXPECT_NEAR(solve_benchmark(inst, false).objective, 0.5, 1e-12);
}

TEST(Star, InduceAndCompetition) {
  const Instance inst = gap_instance(4);
  const auto lp = solve_benchmark(inst, true);
  const auto& edges = inst.edges_at_online(0);
  const StarProblem star = induce_star(inst, lp, 0, edges);
  ASSERT_EQ(star.edges.size(), 4u);
  EXPECT_TRUE(is_feasible(star));
  for (const auto& e : star.edges) EXPECT_NEAR(e.g, 1.0, 1e-12);
  EXPECT_NEAR(competition(star, edges[0]), 0.75, 1e-12);
  EXPECT_THROW(competition(star, 999), std::out_of_range);
  const std::vector<std::size_t> foreign{inst.edges_at_online(1)[0]};
  EXPECT_THROW(induce_star(inst, lp, 0, foreign), std::invalid_argument);
}
