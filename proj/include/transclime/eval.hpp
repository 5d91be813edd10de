#ifndef TRANSCLIME_EVAL_HPP_
#define TRANSCLIME_EVAL_HPP_

#include <cstdint>
#include <string>
#include <utility>

#include "transclime/inference.hpp"
#include "transclime/matrix.hpp"

namespace transclime {

struct Scorecard {
  std::string method;
  long rep = 0;
  std::uint64_t seed = 0;
  double c_n = 0.0;
  double frob_err = 0.0;
  double pred_err = 0.0;
  double fdp = 0.0;
  double power = 0.0;
  double t_hat = 0.0;
  long n_rejected = 0;
};

// (1/p) * ||omega_hat - omega_true||_F^2
double frobenius_error(const Matrix& omega_hat, const Matrix& omega_true);

// Out-of-sample negative log-likelihood scale:
//   (1/p) { tr(S_test * O+) / 2 - log det(O+) / 2 }
// with O+ the pd projection of the symmetrized estimate and S_test the
// uncentered test covariance.
double prediction_error(const Matrix& omega_init, const Matrix& x_test);

// False discovery proportion and power of a rejection set against the
// true edge pattern {(i,j): i<j, |omega_true_ij| > edge_tol}.
std::pair<double, double> fdp_power(const EdgeReport& report, const Matrix& omega_true,
                                    double edge_tol = 1e-10);

}  // namespace transclime

#endif  // TRANSCLIME_EVAL_HPP_
