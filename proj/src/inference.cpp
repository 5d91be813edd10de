#include "transclime/inference.hpp"

#include <algorithm>
#include <cmath>

#include "transclime/gaussian.hpp"

namespace transclime {

Matrix debias(const Matrix& omega_init, const Matrix& sigma_debias) {
  check_square(omega_init, "debias");
  if (sigma_debias.rows() != omega_init.rows() ||
      sigma_debias.cols() != omega_init.cols()) {
    throw std::invalid_argument("debias: shape mismatch");
  }
  const Matrix quad = omega_init.transpose() * sigma_debias * omega_init;
  return symmetrize(omega_init.transpose() + omega_init - quad);
}

Matrix variance_estimates(const Matrix& omega_init, double v_floor) {
  check_square(omega_init, "variance_estimates");
  const Vector d = omega_init.diagonal();
  Matrix v = d * d.transpose() + omega_init.cwiseProduct(omega_init.transpose());
  return v.cwiseMax(v_floor);
}

std::pair<double, double> confidence_interval(double omega_db_ij, double v_ij,
                                              long n_debias, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("confidence_interval: alpha must lie in (0,1)");
  }
  if (!(v_ij > 0.0) || n_debias < 1) {
    throw std::invalid_argument("confidence_interval: need v > 0 and n >= 1");
  }
  const double zq = normal_quantile(1.0 - alpha / 2.0);
  const double half = zq * std::sqrt(v_ij / static_cast<double>(n_debias));
  return {omega_db_ij - half, omega_db_ij + half};
}

Matrix z_statistics(const Matrix& omega_db, const Matrix& v_hat, long n_debias) {
  check_square(omega_db, "z_statistics");
  if (v_hat.rows() != omega_db.rows() || v_hat.cols() != omega_db.cols()) {
    throw std::invalid_argument("z_statistics: shape mismatch");
  }
  const double root_n = std::sqrt(static_cast<double>(n_debias));
  Matrix z = root_n * omega_db.cwiseQuotient(v_hat.cwiseSqrt());
  z.diagonal().setZero();
  return z;
}

double fdr_threshold(const Matrix& z, double alpha) {
  check_square(z, "fdr_threshold");
  const long p = z.rows();
  if (p < 3) {
    throw std::invalid_argument("fdr_threshold: need p >= 3");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("fdr_threshold: alpha must lie in (0,1)");
  }
  const double q = static_cast<double>(p) * (p - 1) / 2.0;
  const double t_max = std::sqrt(2.0 * std::log(q) - 2.0 * std::log(std::log(q)));
  const double fallback = std::sqrt(2.0 * std::log(q));

  std::vector<double> abs_z;
  abs_z.reserve(static_cast<std::size_t>(q));
  for (long i = 0; i < p; ++i) {
    for (long j = i + 1; j < p; ++j) abs_z.push_back(std::abs(z(i, j)));
  }
  std::sort(abs_z.begin(), abs_z.end());

  // #{|z| >= t} by binary search in the sorted values
  auto count_ge = [&](double t) {
    const auto it = std::lower_bound(abs_z.begin(), abs_z.end(), t);
    return static_cast<double>(abs_z.end() - it);
  };
  auto ratio = [&](double t) {
    return q * normal_ccdf(t) / std::max(count_ge(t), 1.0);
  };

  std::vector<double> candidates;
  candidates.push_back(0.0);
  for (double v : abs_z) {
    if (v > 0.0 && v <= t_max) candidates.push_back(v);
  }
  candidates.push_back(t_max);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double prev = -1.0;
  for (double c : candidates) {
    if (ratio(c) <= alpha) {
      if (prev < 0.0) return c;  // feasible from the very first candidate
      // the count is constant on (prev, c]; the ratio crosses alpha at
      // the interior root of q * Phi_c(t) = alpha * max(N, 1)
      const double n_c = std::max(count_ge(c), 1.0);
      double t_star = normal_quantile(1.0 - alpha * n_c / q);
      t_star = std::clamp(t_star, prev, c);
      return t_star;
    }
    prev = c;
  }
  return fallback;
}

EdgeReport detect_edges(const Matrix& z, double t_hat, double alpha) {
  check_square(z, "detect_edges");
  if (t_hat < 0.0) {
    throw std::invalid_argument("detect_edges: t_hat must be >= 0");
  }
  const long p = z.rows();
  EdgeReport report;
  report.t_hat = t_hat;
  report.alpha = alpha;
  report.q_total = p * (p - 1) / 2;
  for (long i = 0; i < p; ++i) {
    for (long j = i + 1; j < p; ++j) {
      if (std::abs(z(i, j)) >= t_hat) report.rejected.emplace_back(i, j);
    }
  }
  return report;
}

InferenceResult run_inference(const Matrix& omega_init, const Matrix& sigma_debias,
                              long n_debias, double v_floor) {
  InferenceResult res;
  res.omega_db = debias(omega_init, sigma_debias);
  res.v_hat = variance_estimates(omega_init, v_floor);
  res.z = z_statistics(res.omega_db, res.v_hat, n_debias);
  res.n_debias = n_debias;
  return res;
}

}  // namespace transclime
