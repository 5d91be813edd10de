#include "transclime/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "transclime/eval.hpp"
#include "transclime/rng.hpp"

namespace transclime {

double lambda_cl_rule(double c_n, long p, long n) {
  return 2.0 * c_n * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double lambda_delta_rule(double sigma_max, long p, long n) {
  return 2.0 * sigma_max * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double lambda_theta_rule(double c_n, long p, long n_pooled) {
  return 2.0 * c_n *
         std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n_pooled));
}

namespace {

void warn_nonpositive_diagonal(const Matrix& omega, const std::string& method) {
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    if (omega(j, j) <= 0.0) {
      std::fprintf(stderr,
                   "warning: %s estimate has non-positive diagonal entry at "
                   "column %ld (%.3g)\n",
                   method.c_str(), static_cast<long>(j), omega(j, j));
      return;
    }
  }
}

}  // namespace

PrecisionEstimate clime(const Matrix& sigma_hat, double lambda_cl,
                        const L1SolveConfig& solver, int num_threads) {
  check_square(sigma_hat, "clime");
  L1SolveConfig cfg = solver;
  cfg.lambda = lambda_cl;
  PrecisionEstimate est;
  est.omega = solve_columns(sigma_hat, Matrix::Identity(sigma_hat.rows(), sigma_hat.cols()),
                            cfg, num_threads);
  est.method = "clime";
  est.lambdas.lambda_cl = lambda_cl;
  warn_nonpositive_diagonal(est.omega, est.method);
  return est;
}

Matrix estimate_delta_init(const Matrix& sigma_hat, const Matrix& sigma_pooled,
                           double lambda_delta, const L1SolveConfig& solver,
                           int num_threads) {
  check_square(sigma_hat, "estimate_delta_init");
  if (sigma_pooled.rows() != sigma_hat.rows() || sigma_pooled.cols() != sigma_hat.cols()) {
    throw std::invalid_argument("estimate_delta_init: shape mismatch");
  }
  L1SolveConfig cfg = solver;
  cfg.lambda = lambda_delta;
  return solve_columns(sigma_hat, sigma_pooled - sigma_hat, cfg, num_threads);
}

Matrix refine_delta(const Matrix& delta_init, const Matrix& omega_cl,
                    const Matrix& sigma_hat, const Matrix& sigma_pooled,
                    double lambda_delta) {
  const Matrix residual = sigma_pooled - sigma_hat - sigma_hat * delta_init;
  const Matrix corrected = delta_init + omega_cl * residual;
  return soft_threshold_matrix(corrected, 2.0 * lambda_delta);
}

PrecisionEstimate estimate_theta(const Matrix& sigma_pooled, const Matrix& delta_a,
                                 double lambda_theta, const L1SolveConfig& solver,
                                 int num_threads) {
  check_square(sigma_pooled, "estimate_theta");
  if (delta_a.rows() != sigma_pooled.rows() || delta_a.cols() != sigma_pooled.cols()) {
    throw std::invalid_argument("estimate_theta: shape mismatch");
  }
  L1SolveConfig cfg = solver;
  cfg.lambda = lambda_theta;
  // rhs column j is the j-th row of (delta_a + I)
  const Matrix rhs =
      (delta_a + Matrix::Identity(delta_a.rows(), delta_a.cols())).transpose();
  PrecisionEstimate est;
  est.omega = solve_columns(sigma_pooled, rhs, cfg, num_threads);
  est.method = "theta";
  est.lambdas.lambda_theta = lambda_theta;
  return est;
}

std::array<double, 2> simplex_project_2d(double v1, double v2) {
  if (!std::isfinite(v1) || !std::isfinite(v2)) {
    throw std::invalid_argument("simplex_project_2d: non-finite input");
  }
  double a = (v1 - v2 + 1.0) / 2.0;
  a = std::clamp(a, 0.0, 1.0);
  return {a, 1.0 - a};
}

std::pair<PrecisionEstimate, AggregationWeights> aggregate(const Matrix& omega_cl,
                                                           const Matrix& theta,
                                                           const Matrix& sigma_agg) {
  check_square(sigma_agg, "aggregate");
  const long p = sigma_agg.rows();
  if (omega_cl.rows() != p || omega_cl.cols() != p || theta.rows() != p ||
      theta.cols() != p) {
    throw std::invalid_argument("aggregate: shape mismatch");
  }
  const Matrix sa = sigma_agg * omega_cl;
  const Matrix st = sigma_agg * theta;

  PrecisionEstimate est;
  est.omega.resize(p, p);
  est.method = "trans-clime";
  AggregationWeights weights;
  weights.v.resize(static_cast<std::size_t>(p));
  weights.regularized.assign(static_cast<std::size_t>(p), false);

  for (long j = 0; j < p; ++j) {
    double w11 = omega_cl.col(j).dot(sa.col(j));
    double w12 = omega_cl.col(j).dot(st.col(j));
    double w22 = theta.col(j).dot(st.col(j));
    const double b1 = omega_cl(j, j);
    const double b2 = theta(j, j);

    // 2x2 eigenvalues give the condition number directly
    const double mean = (w11 + w22) / 2.0;
    const double disc = std::sqrt(std::max((w11 - w22) * (w11 - w22) / 4.0 + w12 * w12, 0.0));
    const double eig_min = mean - disc;
    const double eig_max = mean + disc;
    if (!(eig_min > 0.0) || eig_max > 1e12 * eig_min) {
      const double ridge = 1e-8 * (w11 + w22) / 2.0;
      w11 += ridge;
      w22 += ridge;
      weights.regularized[static_cast<std::size_t>(j)] = true;
    }
    const double det = w11 * w22 - w12 * w12;
    double v1, v2;
    if (std::abs(det) > std::numeric_limits<double>::min()) {
      v1 = (w22 * b1 - w12 * b2) / det;
      v2 = (w11 * b2 - w12 * b1) / det;
    } else {
      // both candidate columns vanish under the metric; any simplex
      // weight yields the same combination
      v1 = 0.5;
      v2 = 0.5;
    }
    const auto v = simplex_project_2d(v1, v2);
    weights.v[static_cast<std::size_t>(j)] = v;
    est.omega.col(j) = v[0] * omega_cl.col(j) + v[1] * theta.col(j);
  }
  return {est, weights};
}

PrecisionEstimate trans_clime(const Dataset& dataset, const TuningConfig& cfg) {
  const long n = dataset.target.n();
  const long p = dataset.p();

  if (dataset.informative_labels.empty()) {
    std::fprintf(stderr,
                 "warning: empty informative set, falling back to single-study "
                 "CLIME on all target data\n");
    const Matrix sigma_full = sample_covariance(dataset.target.samples);
    PrecisionEstimate est = clime(sigma_full, lambda_cl_rule(cfg.c_n, p, n),
                                  cfg.solver, cfg.num_threads);
    est.lambdas.c_n = cfg.c_n;
    est.split_seed = cfg.seed;
    return est;
  }

  Matrix sigma_hat, sigma_agg;
  if (cfg.split_enabled) {
    const SplitIndices split = split_target(n, cfg.split_fraction, cfg.seed);
    sigma_hat = sample_covariance(rows_of(dataset.target.samples, split.fit_idx));
    sigma_agg = sample_covariance(rows_of(dataset.target.samples, split.agg_idx));
  } else {
    sigma_hat = sample_covariance(dataset.target.samples);
    sigma_agg = sigma_hat;
  }
  const auto [sigma_pooled, n_pooled] =
      pooled_covariance(dataset.auxiliaries, dataset.informative_labels);
  if (sigma_pooled.rows() != p) {
    throw std::invalid_argument("trans_clime: auxiliary dimension mismatch");
  }

  LambdaRecord lam;
  lam.c_n = cfg.c_n;
  lam.lambda_cl = lambda_cl_rule(cfg.c_n, p, n);
  lam.lambda_delta = lambda_delta_rule(sigma_hat.diagonal().maxCoeff(), p, n);
  lam.lambda_theta = lambda_theta_rule(cfg.c_n, p, n_pooled);

  PrecisionEstimate omega_cl;
  try {
    omega_cl = clime(sigma_hat, lam.lambda_cl, cfg.solver, cfg.num_threads);
  } catch (const SolverError& e) {
    throw SolverError(std::string("trans_clime [clime step]: ") + e.what());
  }

  Matrix delta_a;
  try {
    const Matrix delta_init = estimate_delta_init(sigma_hat, sigma_pooled,
                                                  lam.lambda_delta, cfg.solver,
                                                  cfg.num_threads);
    delta_a = refine_delta(delta_init, omega_cl.omega, sigma_hat, sigma_pooled,
                           lam.lambda_delta);
  } catch (const SolverError& e) {
    throw SolverError(std::string("trans_clime [divergence step]: ") + e.what());
  }

  PrecisionEstimate theta;
  try {
    theta = estimate_theta(sigma_pooled, delta_a, lam.lambda_theta, cfg.solver,
                           cfg.num_threads);
  } catch (const SolverError& e) {
    throw SolverError(std::string("trans_clime [theta step]: ") + e.what());
  }

  auto [est, weights] = aggregate(omega_cl.omega, theta.omega, sigma_agg);
  est.lambdas = lam;
  est.split_seed = cfg.seed;
  warn_nonpositive_diagonal(est.omega, est.method);
  return est;
}

PrecisionEstimate trans_clime_pooled(const Dataset& dataset, const TuningConfig& cfg) {
  Dataset all = dataset;
  all.informative_labels.clear();
  for (const auto& s : dataset.auxiliaries) all.informative_labels.push_back(s.label);
  PrecisionEstimate est = trans_clime(all, cfg);
  if (est.method == "trans-clime") est.method = "pooled";
  return est;
}

std::vector<double> default_cn_grid() {
  std::vector<double> grid;
  const double lo = 0.1, hi = 4.0;
  const int m = 16;
  for (int k = 0; k < m; ++k) {
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (m - 1)));
  }
  return grid;
}

double tune_cn(const Dataset& dataset, const std::vector<double>& grid, int folds,
               std::uint64_t seed, const TuningConfig& cfg) {
  if (grid.empty()) {
    throw std::invalid_argument("tune_cn: empty grid");
  }
  if (folds < 2) {
    throw std::invalid_argument("tune_cn: need at least 2 folds");
  }
  const Matrix& x = dataset.target.samples;
  const long n = x.rows();
  const long p = x.cols();
  if (n < folds) {
    throw std::invalid_argument("tune_cn: fewer samples than folds");
  }

  std::vector<long> idx(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  // contiguous chunks of the shuffled indices, sizes differing by at most 1
  std::vector<std::vector<long>> fold_idx(static_cast<std::size_t>(folds));
  for (long i = 0; i < n; ++i) {
    fold_idx[static_cast<std::size_t>(i % folds)].push_back(idx[static_cast<std::size_t>(i)]);
  }

  std::vector<double> sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());

  double best_cn = std::numeric_limits<double>::quiet_NaN();
  double best_err = std::numeric_limits<double>::infinity();
  bool any = false;
  for (double c_n : sorted_grid) {
    double total = 0.0;
    bool failed = false;
    for (int f = 0; f < folds && !failed; ++f) {
      std::vector<long> train;
      for (int g = 0; g < folds; ++g) {
        if (g == f) continue;
        const auto& chunk = fold_idx[static_cast<std::size_t>(g)];
        train.insert(train.end(), chunk.begin(), chunk.end());
      }
      const Matrix x_train = rows_of(x, train);
      const Matrix x_test = rows_of(x, fold_idx[static_cast<std::size_t>(f)]);
      try {
        const Matrix sigma = sample_covariance(x_train);
        PrecisionEstimate fit =
            clime(sigma, lambda_cl_rule(c_n, p, n), cfg.solver, cfg.num_threads);
        total += prediction_error(fit.omega, x_test);
      } catch (const SolverError&) {
        failed = true;
      }
    }
    if (failed) continue;
    any = true;
    const double mean_err = total / folds;
    if (mean_err < best_err) {
      best_err = mean_err;
      best_cn = c_n;
    }
  }
  if (!any) {
    throw SolverError("tune_cn: every grid value failed to fit");
  }
  return best_cn;
}

}  // namespace transclime
