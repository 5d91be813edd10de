#ifndef TRANSCLIME_MATRIX_HPP_
#define TRANSCLIME_MATRIX_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace transclime {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numerical failure inside a solver or decomposition.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Throws std::invalid_argument if any entry is NaN or infinite.
void check_finite(const Matrix& m, const std::string& what);
void check_finite(const Vector& v, const std::string& what);
void check_square(const Matrix& m, const std::string& what);

// (A + A^T)/2 with mirrored entries averaged once, so the result is
// symmetric bitwise and the map is exactly idempotent.
Matrix symmetrize(const Matrix& a);

// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
// Columns of `vectors` are the corresponding eigenvectors.
struct SymEigen {
  Vector values;
  Matrix vectors;
};
SymEigen sym_eigen(const Matrix& s);

// Default floor for pd_project: 1e-4 * max(1, largest eigenvalue).
double default_pd_eps(const Matrix& s);

// Clamp eigenvalues below eps up to eps and reconstruct. Returns the
// input unchanged when it is already positive definite with smallest
// eigenvalue >= eps.
Matrix pd_project(const Matrix& s, double eps);
Matrix pd_project(const Matrix& s);

// Lower-triangular L with L L^T = S. Throws SolverError on non-PD input.
Matrix cholesky_lower(const Matrix& s);

// log det of a symmetric PD matrix via its Cholesky factor.
double log_det_pd(const Matrix& s);

}  // namespace transclime

#endif  // TRANSCLIME_MATRIX_HPP_
