#ifndef TRANSCLIME_DATA_HPP_
#define TRANSCLIME_DATA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "transclime/matrix.hpp"

namespace transclime {

struct StudyData {
  Matrix samples;  // n x p, rows are observations
  std::string label;

  long n() const { return samples.rows(); }
  long p() const { return samples.cols(); }
};

struct Dataset {
  StudyData target;
  std::vector<StudyData> auxiliaries;
  // labels of the informative auxiliary studies (may be empty)
  std::vector<std::string> informative_labels;
  std::vector<std::string> variable_names;

  long p() const { return target.p(); }
  std::vector<const StudyData*> informative() const;
};

struct SplitIndices {
  std::vector<long> fit_idx;
  std::vector<long> agg_idx;
  std::uint64_t seed = 0;
};

// (1/n) sum_i x_i x_i' ; with center=true column means are removed first
// (still dividing by n).
Matrix sample_covariance(const Matrix& x, bool center = false);

// Deterministic disjoint split of {0..n-1}; |fit| = round(fraction * n),
// clamped so both parts are nonempty.
SplitIndices split_target(long n, double fraction, std::uint64_t seed);

Matrix rows_of(const Matrix& x, const std::vector<long>& idx);

// Pooled covariance sum_k X_k' X_k / sum_k n_k over the named studies;
// equals the covariance of the row-concatenated sample matrix. Also
// returns n_A = sum of their sample sizes.
std::pair<Matrix, long> pooled_covariance(const std::vector<StudyData>& aux,
                                          const std::vector<std::string>& labels);

struct LoadOptions {
  bool center = false;       // subtract per-column means per study
  bool standardize = false;  // divide by per-column sd per study
};

// Manifest JSON: {"target": path, "auxiliaries": [{"path":..,"label":..}],
// "informative": [labels]}. Relative paths resolve against the manifest
// directory. Variables with a missing value in any study are dropped from
// every study.
Dataset load_dataset(const std::string& manifest_path,
                     const LoadOptions& opts = {});

}  // namespace transclime

#endif  // TRANSCLIME_DATA_HPP_
