#ifndef TRANSCLIME_L1_SOLVER_HPP_
#define TRANSCLIME_L1_SOLVER_HPP_

#include "transclime/matrix.hpp"

namespace transclime {

struct L1SolveConfig {
  double lambda = 0.0;      // constraint radius, >= 0
  int max_iter = 20000;     // simplex pivot budget per column
  double primal_tol = 1e-7; // accepted constraint violation
  double dual_tol = 1e-9;   // reduced-cost threshold for optimality
  double rho = 1.0;         // splitting penalty; only operator-splitting
                            // backends read this, the LP backend ignores it
};

struct ColumnSolution {
  Vector omega;
  double l1_norm = 0.0;
  double max_violation = 0.0;  // max(||A w - b||_inf - lambda, 0)
  int iterations = 0;
  bool converged = false;
};

// min ||w||_1  subject to  ||A w - b||_inf <= lambda.
//
// Solved as the LP  min 1'u + 1'v  s.t.  Au - Av + r = b + lambda*1,
// u, v >= 0, 0 <= r <= 2*lambda, with a bounded-variable revised simplex
// (dense explicit basis inverse, two-phase artificial start, Dantzig
// pricing with a Bland fallback after stalls). lambda = 0 falls back to a
// direct linear solve and requires invertible A.
//
// Throws SolverError when the constraints are infeasible; returns the
// best iterate with converged=false when max_iter runs out.
ColumnSolution solve_l1_linf(const Matrix& a, const Vector& b,
                             const L1SolveConfig& cfg);

// Column-wise solve: column j of the result minimizes the l1 norm under
// ||A w - rhs_j||_inf <= lambda. Columns are independent and may run in
// parallel (num_threads <= 0 picks a default). Throws SolverError naming
// the first failing column.
Matrix solve_columns(const Matrix& a, const Matrix& rhs,
                     const L1SolveConfig& cfg, int num_threads = 1);

// Entrywise soft threshold: sign(d) * max(|d| - tau, 0). This is the
// exact minimizer of min ||M||_1 s.t. ||M - d||_max <= tau.
Matrix soft_threshold_matrix(const Matrix& d, double tau);

// Exact reference solution of the same LP via a dense two-phase tableau
// simplex over (u, v, slacks) with lexicographic ratio-test tie-breaking.
// Deliberately independent of solve_l1_linf; desk scale only (p <= 12).
Vector lp_oracle(const Matrix& a, const Vector& b, double lambda);

}  // namespace transclime

#endif  // TRANSCLIME_L1_SOLVER_HPP_
