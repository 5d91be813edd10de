#ifndef TRANSCLIME_SIMGEN_HPP_
#define TRANSCLIME_SIMGEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "transclime/matrix.hpp"
#include "transclime/rng.hpp"

namespace transclime {

enum class Design { Banded, BlockToeplitz };

std::string design_name(Design d);
Design design_from_name(const std::string& name);

struct SimConfig {
  long n = 120;
  long p = 50;
  long K = 3;
  long n_k = 240;
  long num_informative = 3;
  double r = 10.0;
  double divergence_density = 0.1;
  Design design = Design::BlockToeplitz;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  Matrix omega;               // target precision
  Matrix sigma;               // its inverse
  std::vector<Matrix> aux_omegas;
  std::vector<std::string> informative_labels;  // "aux1".."auxM"
  double empirical_h = 0.0;
};

// Banded target: omega_ij = 2 * 0.6^|i-j| for |i-j| <= 7, else 0. p >= 8.
Matrix banded_precision(long p);

// Block-diagonal target with 4x4 Toeplitz(1.2, 0.9, 0.6, 0.3) blocks. A
// trailing block of size p mod 4 uses the leading submatrix so any p >= 2
// works (needed for the p = 50 benchmark dimension).
Matrix block_toeplitz_precision(long p);

// Entries are zero with probability 1-density, otherwise U[-r/p, r/p].
// Draws run row-major: one uniform for the zero/nonzero choice, then one
// for the value when nonzero.
Matrix gen_divergence(long p, double r, double density, Rng& rng);

// Auxiliary precision implied by a divergence matrix:
// sigma_k = sigma * (I + delta), omega_k = inverse, then symmetrize and
// pd_project at eps (the overload without eps uses the default floor of
// the symmetrized inverse). Throws SolverError when sigma_k is
// numerically singular (caller retries with a fresh delta).
Matrix informative_aux(const Matrix& omega_target, const Matrix& delta, double eps);
Matrix informative_aux(const Matrix& omega_target, const Matrix& delta);

// 1.5*I plus off-diagonal Bernoulli(0.1) * 0.2 noise (drawn row-major on
// all i != j), symmetrized and pd-projected.
Matrix noninformative_aux(long p, Rng& rng);

// Rows are L z with L the Cholesky factor of sigma and z standard normal
// via the inverse-CDF transform; draws run row by row.
Matrix sample_mvn(const Matrix& sigma, long n, Rng& rng);

// Similarity measure: max row l1 norm + max column l1 norm of
// omega_target * inv(omega_aux) - I.
double divergence_measure(const Matrix& omega_aux, const Matrix& omega_target);

// Target by design, first num_informative auxiliaries via gen_divergence
// + informative_aux (retrying on singular draws), the rest via
// noninformative_aux. Each auxiliary uses its own derived RNG stream
// (derive_seed(seed, 100 + k)), so regenerating with a different
// num_informative only changes the affected studies. empirical_h is
// recomputed from the final projected matrices.
GroundTruth build_ground_truth(const SimConfig& cfg);

}  // namespace transclime

#endif  // TRANSCLIME_SIMGEN_HPP_
