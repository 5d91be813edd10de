#ifndef TRANSCLIME_INFERENCE_HPP_
#define TRANSCLIME_INFERENCE_HPP_

#include <utility>
#include <vector>

#include "transclime/matrix.hpp"

namespace transclime {

struct InferenceResult {
  Matrix omega_db;  // symmetric debiased estimate
  Matrix v_hat;     // entrywise variance estimates, floored
  Matrix z;         // z statistics, zero diagonal
  long n_debias = 0;
};

struct EdgeReport {
  std::vector<std::pair<long, long>> rejected;  // pairs with i < j
  double t_hat = 0.0;
  double alpha = 0.0;
  long q_total = 0;  // p(p-1)/2
};

// One-step debiased estimate omega' + omega - omega' * sigma * omega.
// The initial estimate may be asymmetric; the result is symmetric and is
// re-symmetrized to remove floating-point asymmetry.
Matrix debias(const Matrix& omega_init, const Matrix& sigma_debias);

// V_ij = omega_ii * omega_jj + omega_ij * omega_ji from the initial
// estimate, floored at v_floor to keep downstream z finite.
Matrix variance_estimates(const Matrix& omega_init, double v_floor = 1e-8);

// Two-sided interval center +- z_{1-alpha/2} * sqrt(v / n).
std::pair<double, double> confidence_interval(double omega_db_ij, double v_ij,
                                              long n_debias, double alpha);

// z_ij = sqrt(n) * omega_db_ij / sqrt(v_ij); diagonal forced to zero.
Matrix z_statistics(const Matrix& omega_db, const Matrix& v_hat, long n_debias);

// Smallest t in [0, sqrt(2 log q - 2 log log q)] with
//   q * Phi_c(t) / max(#{|z_ij| >= t}, 1) <= alpha,
// computed exactly: the count is piecewise constant between sorted |z|
// values and the ratio decreases within each piece, so the infimum is
// either a candidate point or the interior root of q*Phi_c(t) = alpha*N.
// Returns sqrt(2 log q) when no t in the range qualifies.
double fdr_threshold(const Matrix& z, double alpha);

// All pairs i < j with |z_ij| >= t_hat.
EdgeReport detect_edges(const Matrix& z, double t_hat, double alpha);

// Debias + variance + z in one pass.
InferenceResult run_inference(const Matrix& omega_init, const Matrix& sigma_debias,
                              long n_debias, double v_floor = 1e-8);

}  // namespace transclime

#endif  // TRANSCLIME_INFERENCE_HPP_
