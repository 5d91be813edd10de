#ifndef TRANSCLIME_ESTIMATORS_HPP_
#define TRANSCLIME_ESTIMATORS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "transclime/data.hpp"
#include "transclime/l1_solver.hpp"
#include "transclime/matrix.hpp"

namespace transclime {

struct LambdaRecord {
  double c_n = 0.0;
  double lambda_cl = 0.0;
  double lambda_delta = 0.0;
  double lambda_theta = 0.0;
};

struct PrecisionEstimate {
  Matrix omega;  // possibly asymmetric
  std::string method;  // "clime" | "trans-clime" | "pooled"
  LambdaRecord lambdas;
  std::uint64_t split_seed = 0;
};

struct AggregationWeights {
  std::vector<std::array<double, 2>> v;  // per column, on the simplex
  std::vector<bool> regularized;         // ridge applied to W(j)
};

struct TuningConfig {
  double c_n = 1.0;
  double split_fraction = 2.0 / 3.0;
  bool split_enabled = true;
  std::uint64_t seed = 0;
  L1SolveConfig solver;  // tolerances; lambda is set per step
  int num_threads = 1;
};

// All lambda defaults follow the same rule family: the target study's
// total sample count n enters as sqrt(log p / n) regardless of how the
// data are folded, and the pooled informative count n_A replaces n in the
// theta step.
double lambda_cl_rule(double c_n, long p, long n);
double lambda_delta_rule(double sigma_max, long p, long n);
double lambda_theta_rule(double c_n, long p, long n_pooled);

// Single-study CLIME: column j minimizes ||w||_1 subject to
// ||Sigma_hat w - e_j||_inf <= lambda_cl. The output is not symmetrized.
PrecisionEstimate clime(const Matrix& sigma_hat, double lambda_cl,
                        const L1SolveConfig& solver = {}, int num_threads = 1);

// Column j minimizes ||d||_1 s.t. ||Sigma_hat d - (Sigma_pooled - Sigma_hat)_j||_inf <= lambda_delta.
Matrix estimate_delta_init(const Matrix& sigma_hat, const Matrix& sigma_pooled,
                           double lambda_delta, const L1SolveConfig& solver = {},
                           int num_threads = 1);

// Soft-thresholds the bias-corrected divergence
//   D = delta_init + omega_cl * (sigma_pooled - sigma_hat - sigma_hat * delta_init)
// at 2 * lambda_delta.
Matrix refine_delta(const Matrix& delta_init, const Matrix& omega_cl,
                    const Matrix& sigma_hat, const Matrix& sigma_pooled,
                    double lambda_delta);

// Column j minimizes ||t||_1 s.t.
// ||Sigma_pooled t - row_j(delta_a + I)||_inf <= lambda_theta.
// The right-hand side takes rows of (delta_a + I), i.e. columns of its
// transpose.
PrecisionEstimate estimate_theta(const Matrix& sigma_pooled, const Matrix& delta_a,
                                 double lambda_theta, const L1SolveConfig& solver = {},
                                 int num_threads = 1);

// Euclidean projection onto {(a,b): a,b >= 0, a+b = 1}.
std::array<double, 2> simplex_project_2d(double v1, double v2);

// Per-column least-squares combination of the CLIME and pooled columns
// under the held-out covariance metric, with the weights projected onto
// the simplex. Ill-conditioned 2x2 systems get a small ridge.
std::pair<PrecisionEstimate, AggregationWeights> aggregate(
    const Matrix& omega_cl, const Matrix& theta, const Matrix& sigma_agg);

// Full three-step pipeline: split the target samples, fit CLIME and the
// divergence-corrected pooled estimator on the fit fold, aggregate on the
// held-out fold. Falls back to single-study CLIME on all target data when
// the informative set is empty (with a warning on stderr).
PrecisionEstimate trans_clime(const Dataset& dataset, const TuningConfig& cfg);

// Same pipeline with every auxiliary study treated as informative.
PrecisionEstimate trans_clime_pooled(const Dataset& dataset, const TuningConfig& cfg);

// 16 log-spaced points in [0.1, 4].
std::vector<double> default_cn_grid();

// Five-fold cross-validation of c_n for CLIME: fit on four folds with
// lambda_cl_rule(c_n, p, n), score the held-out fold by prediction error,
// return the grid argmin (ties to the smaller c_n). Grid values whose
// fits fail anywhere are excluded; throws if none survives.
double tune_cn(const Dataset& dataset, const std::vector<double>& grid,
               int folds, std::uint64_t seed, const TuningConfig& cfg = {});

}  // namespace transclime

#endif  // TRANSCLIME_ESTIMATORS_HPP_
