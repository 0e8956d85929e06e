#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stomatch/instance.hpp"

namespace stomatch {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

class LpError : public std::runtime_error {
 public:
  LpError(LpStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
  LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 so the all-slack
/// basis is feasible. A is row-major, rows() x cols().
struct DenseLp {
  std::vector<double> objective;
  std::vector<double> matrix;
  std::vector<double> rhs;

  std::size_t cols() const { return objective.size(); }
  std::size_t rows() const { return rhs.size(); }
  void add_row(std::span<const double> coeffs, double bound);
};

struct DenseLpResult {
  std::vector<double> primal;
  std::vector<double> dual;  // one multiplier per row, >= 0
  double objective = 0.0;
  double dual_objective = 0.0;
  std::size_t pivots = 0;
};

/// Tableau primal simplex. Entering and leaving variables follow Bland's
/// lowest-index rule, so degenerate problems terminate. Throws LpError.
DenseLpResult solve_dense_lp(const DenseLp& lp);

/// Optimal solution of the benchmark LP. `flow[e]` is f_e, the expected
/// number of probes of edge e; objective = sum w_e f_e p_e.
struct LpSolution {
  std::vector<double> flow;
  double objective = 0.0;
  double dual_objective = 0.0;

  /// F_u = sum over the edges of u of f_e p_e.
  double offline_load(const Instance& instance, std::size_t u) const;
};

/// Solves the benchmark LP. With `one_sided` the offline patience rows use
/// t_u = n instead of the instance timeouts. Flows below 1e-12 are reported
/// as exactly 0. Throws LpError if the solver fails, which for a valid
/// instance indicates a bug (f = 0 is feasible and the LP is bounded).
LpSolution solve_benchmark(const Instance& instance, bool one_sided);

/// Largest violation of the LP constraints by `solution` (0 if feasible).
double max_violation(const Instance& instance, const LpSolution& solution, bool one_sided);

/// Star of online type v over `safe_edges` (edge positions, all incident to
/// v) with g_e = f_e / r_v. Throws std::invalid_argument if an edge is not
/// incident to v.
StarProblem induce_star(const Instance& instance, const LpSolution& lp, std::size_t v,
                        std::span<const std::size_t> safe_edges);

/// lambda(e, g): sum of g*p over the other edges of the star, i.e. the
/// competition edge `edge_id` (a StarEdge::edge label) faces. Throws
/// std::out_of_range for labels not in the star.
double competition(const StarProblem& star, std::size_t edge_id);

}  // namespace stomatch
