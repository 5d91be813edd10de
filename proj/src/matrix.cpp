#include "transclime/matrix.hpp"

#include <cmath>

namespace transclime {

void check_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

void check_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

void check_square(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(what + ": expected a square matrix, got " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
}

Matrix symmetrize(const Matrix& a) {
  check_square(a, "symmetrize");
  const Eigen::Index p = a.rows();
  Matrix s(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    s(j, j) = a(j, j);
    for (Eigen::Index i = j + 1; i < p; ++i) {
      const double v = (a(i, j) + a(j, i)) / 2.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

SymEigen sym_eigen(const Matrix& s) {
  check_square(s, "sym_eigen");
  check_finite(s, "sym_eigen");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) {
    throw SolverError("sym_eigen: eigendecomposition failed");
  }
  return SymEigen{es.eigenvalues(), es.eigenvectors()};
}

double default_pd_eps(const Matrix& s) {
  const SymEigen es = sym_eigen(s);
  return 1e-4 * std::max(1.0, es.values(es.values.size() - 1));
}

Matrix pd_project(const Matrix& s, double eps) {
  if (eps <= 0) {
    throw std::invalid_argument("pd_project: eps must be positive");
  }
  SymEigen es = sym_eigen(s);
  if (es.values(0) >= eps) {
    return s;
  }
  Vector clamped = es.values.cwiseMax(eps);
  Matrix out = es.vectors * clamped.asDiagonal() * es.vectors.transpose();
  return symmetrize(out);
}

Matrix pd_project(const Matrix& s) { return pd_project(s, default_pd_eps(s)); }

Matrix cholesky_lower(const Matrix& s) {
  check_square(s, "cholesky_lower");
  check_finite(s, "cholesky_lower");
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SolverError("cholesky_lower: matrix is not positive definite");
  }
  return llt.matrixL();
}

double log_det_pd(const Matrix& s) {
  const Matrix l = cholesky_lower(s);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i));
  }
  return 2.0 * acc;
}

}  // namespace transclime
