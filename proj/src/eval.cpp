#include "transclime/eval.hpp"

#include <cmath>
#include <set>

#include "transclime/data.hpp"

namespace transclime {

double frobenius_error(const Matrix& omega_hat, const Matrix& omega_true) {
  if (omega_hat.rows() != omega_true.rows() || omega_hat.cols() != omega_true.cols()) {
    throw std::invalid_argument("frobenius_error: shape mismatch");
  }
  return (omega_hat - omega_true).squaredNorm() / static_cast<double>(omega_hat.rows());
}

double prediction_error(const Matrix& omega_init, const Matrix& x_test) {
  check_square(omega_init, "prediction_error");
  if (x_test.rows() < 1 || x_test.cols() != omega_init.rows()) {
    throw std::invalid_argument("prediction_error: bad test matrix shape");
  }
  const Matrix sym = symmetrize(omega_init);
  const Matrix proj = pd_project(sym);
  const Matrix s_test = sample_covariance(x_test);
  const double p = static_cast<double>(omega_init.rows());
  return ((s_test * proj).trace() / 2.0 - log_det_pd(proj) / 2.0) / p;
}

std::pair<double, double> fdp_power(const EdgeReport& report, const Matrix& omega_true,
                                    double edge_tol) {
  check_square(omega_true, "fdp_power");
  const long p = omega_true.rows();
  std::set<std::pair<long, long>> truth;
  for (long i = 0; i < p; ++i) {
    for (long j = i + 1; j < p; ++j) {
      if (std::abs(omega_true(i, j)) > edge_tol) truth.emplace(i, j);
    }
  }
  long false_pos = 0, true_pos = 0;
  for (const auto& edge : report.rejected) {
    if (truth.count(edge)) {
      ++true_pos;
    } else {
      ++false_pos;
    }
  }
  const double fdp =
      static_cast<double>(false_pos) /
      std::max<double>(static_cast<double>(report.rejected.size()), 1.0);
  const double power =
      truth.empty() ? 0.0
                    : static_cast<double>(true_pos) / static_cast<double>(truth.size());
  return {fdp, power};
}

}  // namespace transclime
