#include "transclime/simgen.hpp"

#include <cmath>
#include <stdexcept>

namespace transclime {

std::string design_name(Design d) {
  return d == Design::Banded ? "banded" : "block-toeplitz";
}

Design design_from_name(const std::string& name) {
  if (name == "banded") return Design::Banded;
  if (name == "block-toeplitz" || name == "block_toeplitz" || name == "toeplitz") {
    return Design::BlockToeplitz;
  }
  throw std::invalid_argument("unknown design '" + name + "'");
}

Matrix banded_precision(long p) {
  if (p < 8) {
    throw std::invalid_argument("banded_precision: need p >= 8");
  }
  Matrix omega = Matrix::Zero(p, p);
  for (long i = 0; i < p; ++i) {
    for (long j = std::max(0L, i - 7); j <= std::min(p - 1, i + 7); ++j) {
      omega(i, j) = 2.0 * std::pow(0.6, static_cast<double>(std::abs(i - j)));
    }
  }
  return omega;
}

Matrix block_toeplitz_precision(long p) {
  if (p < 2) {
    throw std::invalid_argument("block_toeplitz_precision: need p >= 2");
  }
  const double t[4] = {1.2, 0.9, 0.6, 0.3};
  Matrix omega = Matrix::Zero(p, p);
  for (long s = 0; s < p; s += 4) {
    const long m = std::min<long>(4, p - s);
    for (long a = 0; a < m; ++a) {
      for (long b = 0; b < m; ++b) {
        omega(s + a, s + b) = t[std::abs(a - b)];
      }
    }
  }
  return omega;
}

Matrix gen_divergence(long p, double r, double density, Rng& rng) {
  if (r < 0.0 || density < 0.0 || density > 1.0) {
    throw std::invalid_argument("gen_divergence: need r >= 0 and density in [0,1]");
  }
  Matrix delta = Matrix::Zero(p, p);
  const double bound = r / static_cast<double>(p);
  for (long i = 0; i < p; ++i) {
    for (long j = 0; j < p; ++j) {
      if (rng.bernoulli(density)) {
        delta(i, j) = rng.uniform(-bound, bound);
      }
    }
  }
  return delta;
}

namespace {

Matrix invert_perturbed_covariance(const Matrix& omega_target, const Matrix& delta) {
  check_square(omega_target, "informative_aux");
  const long p = omega_target.rows();
  if (delta.rows() != p || delta.cols() != p) {
    throw std::invalid_argument("informative_aux: shape mismatch");
  }
  Eigen::LLT<Matrix> llt(omega_target);
  if (llt.info() != Eigen::Success) {
    throw SolverError("informative_aux: target precision is not positive definite");
  }
  const Matrix sigma = llt.solve(Matrix::Identity(p, p));
  const Matrix sigma_k = sigma * (Matrix::Identity(p, p) + delta);
  Eigen::PartialPivLU<Matrix> lu(sigma_k);
  const Matrix omega_k = lu.solve(Matrix::Identity(p, p));
  if (!omega_k.allFinite() ||
      (sigma_k * omega_k - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-6) {
    throw SolverError("informative_aux: perturbed covariance is singular");
  }
  return symmetrize(omega_k);
}

}  // namespace

Matrix informative_aux(const Matrix& omega_target, const Matrix& delta, double eps) {
  return pd_project(invert_perturbed_covariance(omega_target, delta), eps);
}

Matrix informative_aux(const Matrix& omega_target, const Matrix& delta) {
  const Matrix sym = invert_perturbed_covariance(omega_target, delta);
  return pd_project(sym, default_pd_eps(sym));
}

Matrix noninformative_aux(long p, Rng& rng) {
  Matrix omega = 1.5 * Matrix::Identity(p, p);
  for (long i = 0; i < p; ++i) {
    for (long j = 0; j < p; ++j) {
      if (i != j && rng.bernoulli(0.1)) {
        omega(i, j) += 0.2;
      }
    }
  }
  const Matrix sym = symmetrize(omega);
  return pd_project(sym, default_pd_eps(sym));
}

Matrix sample_mvn(const Matrix& sigma, long n, Rng& rng) {
  const Matrix l = cholesky_lower(sigma);
  const long p = sigma.rows();
  Matrix x(n, p);
  Vector z(p);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < p; ++j) z(j) = rng.normal();
    x.row(i) = (l * z).transpose();
  }
  return x;
}

double divergence_measure(const Matrix& omega_aux, const Matrix& omega_target) {
  const long p = omega_target.rows();
  const Matrix sigma_aux =
      Eigen::LLT<Matrix>(symmetrize(omega_aux)).solve(Matrix::Identity(p, p));
  const Matrix delta = omega_target * sigma_aux - Matrix::Identity(p, p);
  double max_row = 0.0, max_col = 0.0;
  for (long i = 0; i < p; ++i) {
    max_row = std::max(max_row, delta.row(i).cwiseAbs().sum());
    max_col = std::max(max_col, delta.col(i).cwiseAbs().sum());
  }
  return max_row + max_col;
}

GroundTruth build_ground_truth(const SimConfig& cfg) {
  if (cfg.p < 8 || cfg.n < 3) {
    throw std::invalid_argument("build_ground_truth: need p >= 8 and n >= 3");
  }
  if (cfg.num_informative < 0 || cfg.num_informative > cfg.K) {
    throw std::invalid_argument("build_ground_truth: num_informative out of range");
  }
  GroundTruth gt;
  gt.omega = cfg.design == Design::Banded ? banded_precision(cfg.p)
                                          : block_toeplitz_precision(cfg.p);
  gt.sigma = Eigen::LLT<Matrix>(gt.omega).solve(Matrix::Identity(cfg.p, cfg.p));

  for (long k = 0; k < cfg.K; ++k) {
    Rng rng(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(k)));
    Matrix aux;
    if (k < cfg.num_informative) {
      bool ok = false;
      for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
        const Matrix delta = gen_divergence(cfg.p, cfg.r, cfg.divergence_density, rng);
        try {
          aux = informative_aux(gt.omega, delta);
          ok = true;
        } catch (const SolverError&) {
          // fresh delta on the next attempt
        }
      }
      if (!ok) {
        throw SolverError("build_ground_truth: could not generate auxiliary " +
                          std::to_string(k + 1));
      }
      gt.informative_labels.push_back("aux" + std::to_string(k + 1));
    } else {
      aux = noninformative_aux(cfg.p, rng);
    }
    gt.aux_omegas.push_back(std::move(aux));
  }

  gt.empirical_h = 0.0;
  for (long k = 0; k < cfg.num_informative; ++k) {
    gt.empirical_h = std::max(
        gt.empirical_h,
        divergence_measure(gt.aux_omegas[static_cast<std::size_t>(k)], gt.omega));
  }
  return gt;
}

}  // namespace transclime
