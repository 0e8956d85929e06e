#include "stomatch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace stomatch {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

void DenseLp::add_row(std::span<const double> coeffs, double bound) {
  if (coeffs.size() != cols()) throw std::invalid_argument("DenseLp::add_row: width mismatch");
  matrix.insert(matrix.end(), coeffs.begin(), coeffs.end());
  rhs.push_back(bound);
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

// Tableau layout: row 0 is the objective row (reduced costs, value in the
// last column); rows 1..m are constraints. Columns 0..n-1 structural,
// n..n+m-1 slacks, n+m the right-hand side.
class Tableau {
 public:
  Tableau(const DenseLp& lp) : m_(lp.rows()), n_(lp.cols()), width_(n_ + m_ + 1), data_((m_ + 1) * width_, 0.0), basis_(m_) {
    for (std::size_t j = 0; j < n_; ++j) at(0, j) = -lp.objective[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.rhs[i] < 0.0) {
        throw LpError(LpStatus::infeasible, "solve_dense_lp: negative right-hand side needs a phase-one start");
      }
      for (std::size_t j = 0; j < n_; ++j) at(i + 1, j) = lp.matrix[i * n_ + j];
      at(i + 1, n_ + i) = 1.0;
      at(i + 1, width_ - 1) = lp.rhs[i];
      basis_[i] = n_ + i;
    }
  }

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }

  std::size_t run(std::size_t max_pivots) {
    std::size_t pivots = 0;
    for (;;) {
      std::size_t enter = width_;
      for (std::size_t j = 0; j + 1 < width_; ++j) {
        if (at(0, j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter == width_) return pivots;

      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i + 1, enter);
        if (a > kPivotEps) best = std::min(best, at(i + 1, width_ - 1) / a);
      }
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i + 1, enter);
        if (a <= kPivotEps || at(i + 1, width_ - 1) / a > best + 1e-12) continue;
        if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
      }
      if (leave == m_) throw LpError(LpStatus::unbounded, "solve_dense_lp: objective is unbounded");
      pivot(leave + 1, enter);
      basis_[leave] = enter;
      if (++pivots > max_pivots) throw LpError(LpStatus::iteration_limit, "solve_dense_lp: pivot limit reached");
    }
  }

  DenseLpResult extract(const DenseLp& lp, std::size_t pivots) const {
    DenseLpResult out;
    out.pivots = pivots;
    out.primal.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) out.primal[basis_[i]] = std::max(0.0, at(i + 1, width_ - 1));
    }
    out.dual.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) out.dual[i] = std::max(0.0, at(0, n_ + i));
    for (std::size_t j = 0; j < n_; ++j) out.objective += lp.objective[j] * out.primal[j];
    for (std::size_t i = 0; i < m_; ++i) out.dual_objective += lp.rhs[i] * out.dual[i];
    return out;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double factor = at(i, c);
      if (factor == 0.0) continue;
      double* row = &data_[i * width_];
      const double* prow = &data_[r * width_];
      for (std::size_t j = 0; j < width_; ++j) row[j] -= factor * prow[j];
      row[c] = 0.0;
    }
  }

  std::size_t m_, n_, width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

DenseLpResult solve_dense_lp(const DenseLp& lp) {
  if (lp.matrix.size() != lp.rows() * lp.cols()) throw std::invalid_argument("solve_dense_lp: matrix shape");
  Tableau tableau(lp);
  const std::size_t limit = 50 * (lp.rows() + lp.cols()) + 1000;
  const std::size_t pivots = tableau.run(limit);
  return tableau.extract(lp, pivots);
}

namespace {

DenseLp build_benchmark(const Instance& inst, bool one_sided) {
  const std::size_t m = inst.edges.size();
  DenseLp lp;
  lp.objective.resize(m);
  for (std::size_t e = 0; e < m; ++e) lp.objective[e] = inst.edges[e].weight * inst.edges[e].prob;

  std::vector<double> row(m);
  auto emit = [&](const std::vector<std::size_t>& edges, bool weighted, double bound) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t e : edges) row[e] = weighted ? inst.edges[e].prob : 1.0;
    lp.add_row(row, bound);
  };
  for (std::size_t u = 0; u < inst.offline.size(); ++u) emit(inst.edges_at_offline(u), true, 1.0);
  for (std::size_t v = 0; v < inst.online.size(); ++v) emit(inst.edges_at_online(v), true, inst.online[v].rate);
  for (std::size_t u = 0; u < inst.offline.size(); ++u) {
    emit(inst.edges_at_offline(u), false, one_sided ? inst.horizon : inst.offline[u].timeout);
  }
  for (std::size_t v = 0; v < inst.online.size(); ++v) {
    emit(inst.edges_at_online(v), false, inst.online[v].timeout * inst.online[v].rate);
  }
  for (std::size_t e = 0; e < m; ++e) {
    std::fill(row.begin(), row.end(), 0.0);
    row[e] = 1.0;
    lp.add_row(row, inst.online[inst.online_of(e)].rate);
  }
  return lp;
}

}  // namespace

LpSolution solve_benchmark(const Instance& instance, bool one_sided) {
  const DenseLp lp = build_benchmark(instance, one_sided);
  const DenseLpResult res = solve_dense_lp(lp);
  LpSolution out;
  out.flow = res.primal;
  for (auto& f : out.flow) {
    if (f < 1e-12) f = 0.0;
  }
  for (std::size_t e = 0; e < out.flow.size(); ++e) out.objective += lp.objective[e] * out.flow[e];
  out.dual_objective = res.dual_objective;
  return out;
}

double LpSolution::offline_load(const Instance& instance, std::size_t u) const {
  double s = 0.0;
  for (std::size_t e : instance.edges_at_offline(u)) s += flow[e] * instance.edges[e].prob;
  return s;
}

double max_violation(const Instance& instance, const LpSolution& solution, bool one_sided) {
  const DenseLp lp = build_benchmark(instance, one_sided);
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < lp.cols(); ++j) lhs += lp.matrix[i * lp.cols() + j] * solution.flow[j];
    worst = std::max(worst, lhs - lp.rhs[i]);
  }
  for (double f : solution.flow) worst = std::max(worst, -f);
  return worst;
}

StarProblem induce_star(const Instance& instance, const LpSolution& lp, std::size_t v,
                        std::span<const std::size_t> safe_edges) {
  StarProblem star;
  star.center = v;
  star.patience = instance.online[v].timeout;
  const double rate = instance.online[v].rate;
  star.edges.reserve(safe_edges.size());
  for (std::size_t e : safe_edges) {
    if (e >= instance.edges.size() || instance.online_of(e) != v) {
      throw std::invalid_argument(fmt::format("induce_star: edge {} is not incident to online type {}", e, v));
    }
    star.edges.push_back({e, instance.edges[e].prob, lp.flow[e] / rate});
  }
  return star;
}

double competition(const StarProblem& star, std::size_t edge_id) {
  auto it = std::find_if(star.edges.begin(), star.edges.end(), [&](const StarEdge& e) { return e.edge == edge_id; });
  if (it == star.edges.end()) throw std::out_of_range(fmt::format("competition: edge {} not in star", edge_id));
  double s = 0.0;
  for (const auto& e : star.edges) {
    if (&e != &*it) s += e.g * e.prob;
  }
  return s;
}

}  // namespace stomatch
