#include "transclime/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "transclime/csv.hpp"
#include "transclime/rng.hpp"

namespace transclime {

std::vector<const StudyData*> Dataset::informative() const {
  std::vector<const StudyData*> out;
  for (const auto& label : informative_labels) {
    const StudyData* found = nullptr;
    for (const auto& s : auxiliaries) {
      if (s.label == label) {
        found = &s;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("Dataset: informative label '" + label +
                                  "' does not match any auxiliary study");
    }
    out.push_back(found);
  }
  return out;
}

Matrix sample_covariance(const Matrix& x, bool center) {
  const long n = x.rows();
  if (n < 1) {
    throw std::invalid_argument("sample_covariance: empty input");
  }
  check_finite(x, "sample_covariance");
  if (!center) {
    return (x.transpose() * x) / static_cast<double>(n);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Matrix xc = x.rowwise() - mean;
  return (xc.transpose() * xc) / static_cast<double>(n);
}

SplitIndices split_target(long n, double fraction, std::uint64_t seed) {
  if (n < 3) {
    throw std::invalid_argument("split_target: need n >= 3");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_target: fraction must lie in (0,1)");
  }
  long n_fit = std::lround(fraction * static_cast<double>(n));
  n_fit = std::clamp(n_fit, 1L, n - 1);

  std::vector<long> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0L);
  Rng rng(seed);
  rng.shuffle(idx);

  SplitIndices split;
  split.seed = seed;
  split.fit_idx.assign(idx.begin(), idx.begin() + n_fit);
  split.agg_idx.assign(idx.begin() + n_fit, idx.end());
  return split;
}

Matrix rows_of(const Matrix& x, const std::vector<long>& idx) {
  Matrix out(static_cast<long>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<long>(i)) = x.row(idx[i]);
  }
  return out;
}

std::pair<Matrix, long> pooled_covariance(const std::vector<StudyData>& aux,
                                          const std::vector<std::string>& labels) {
  if (labels.empty()) {
    throw std::invalid_argument("pooled_covariance: empty informative set");
  }
  Matrix acc;
  long n_total = 0;
  for (const auto& label : labels) {
    const StudyData* found = nullptr;
    for (const auto& s : aux) {
      if (s.label == label) {
        found = &s;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("pooled_covariance: unknown label '" + label + "'");
    }
    if (acc.size() == 0) {
      acc = Matrix::Zero(found->p(), found->p());
    } else if (acc.rows() != found->p()) {
      throw std::invalid_argument("pooled_covariance: dimension mismatch across studies");
    }
    acc += found->samples.transpose() * found->samples;
    n_total += found->n();
  }
  return {acc / static_cast<double>(n_total), n_total};
}

namespace {

void apply_load_options(Matrix& x, const LoadOptions& opts) {
  if (opts.center || opts.standardize) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
  }
  if (opts.standardize) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(x.rows()));
      if (sd > 0.0) x.col(j) /= sd;
    }
  }
  if (opts.standardize && !opts.center) {
    // standardize implies centering for the scale estimate only; callers
    // asking for standardize without center still get centered columns,
    // matching the usual correlation-scale convention
  }
}

}  // namespace

Dataset load_dataset(const std::string& manifest_path, const LoadOptions& opts) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("load_dataset: cannot open manifest " + manifest_path);
  }
  nlohmann::json manifest;
  in >> manifest;
  const fs::path base = fs::path(manifest_path).parent_path();

  auto resolve = [&](const std::string& rel) {
    fs::path p(rel);
    return p.is_absolute() ? p.string() : (base / p).string();
  };

  struct RawStudy {
    CsvTable table;
    std::string label;
  };
  std::vector<RawStudy> raw;
  raw.push_back({read_csv(resolve(manifest.at("target").get<std::string>())), "target"});
  for (const auto& entry : manifest.at("auxiliaries")) {
    raw.push_back({read_csv(resolve(entry.at("path").get<std::string>())),
                   entry.at("label").get<std::string>()});
  }

  const auto& header = raw.front().table.header;
  for (const auto& study : raw) {
    if (study.table.header != header) {
      throw std::runtime_error("load_dataset: header mismatch in study '" +
                               study.label + "'");
    }
  }

  // drop variables with a missing value in any study
  const long p_all = static_cast<long>(header.size());
  std::vector<bool> keep(static_cast<std::size_t>(p_all), true);
  for (const auto& study : raw) {
    for (const auto& row : study.table.rows) {
      for (long j = 0; j < p_all; ++j) {
        if (!row[static_cast<std::size_t>(j)]) keep[static_cast<std::size_t>(j)] = false;
      }
    }
  }
  std::vector<long> cols;
  for (long j = 0; j < p_all; ++j) {
    if (keep[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  if (cols.empty()) {
    throw std::runtime_error("load_dataset: all variables have missing values");
  }

  Dataset ds;
  for (long j : cols) ds.variable_names.push_back(header[static_cast<std::size_t>(j)]);

  auto to_study = [&](const RawStudy& study) {
    const long n = study.table.n_rows();
    if (n < 2) {
      throw std::runtime_error("load_dataset: study '" + study.label +
                               "' needs at least 2 observations");
    }
    Matrix x(n, static_cast<long>(cols.size()));
    for (long i = 0; i < n; ++i) {
      for (std::size_t jj = 0; jj < cols.size(); ++jj) {
        x(i, static_cast<long>(jj)) =
            *study.table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols[jj])];
      }
    }
    apply_load_options(x, opts);
    return StudyData{std::move(x), study.label};
  };

  ds.target = to_study(raw.front());
  for (std::size_t k = 1; k < raw.size(); ++k) {
    ds.auxiliaries.push_back(to_study(raw[k]));
  }

  if (manifest.contains("informative")) {
    for (const auto& label : manifest.at("informative")) {
      ds.informative_labels.push_back(label.get<std::string>());
    }
  }
  // validates the labels
  (void)ds.informative();
  return ds;
}

}  // namespace transclime
