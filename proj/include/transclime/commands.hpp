#ifndef TRANSCLIME_COMMANDS_HPP_
#define TRANSCLIME_COMMANDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "transclime/data.hpp"
#include "transclime/estimators.hpp"
#include "transclime/simgen.hpp"

namespace transclime {

inline constexpr int kSchemaVersion = 1;

// Seed streams, all derived from one master seed s via derive_seed:
//   derive(s, 1)       target samples
//   derive(s, 2 + k)   auxiliary study k samples
//   derive(s, 7)       cross-validation folds
//   derive(s, 8)       target sample split (fit/aggregation folds)
//   derive(s, 999)     held-out test samples
//   derive(s, 100 + k) auxiliary truth k (inside build_ground_truth)
// cmd_simulate derives the per-replication master as derive(master, rep).

struct DatagenConfig {
  SimConfig sim;
  std::string out_dir;
};

struct FitOptions {
  std::string method = "trans-clime";  // clime | trans-clime | pooled
  double c_n = 0.0;                    // <= 0: pick by cross-validation
  std::vector<double> cn_grid;         // empty: default_cn_grid()
  int cv_folds = 5;
  double split_fraction = 2.0 / 3.0;
  bool split_enabled = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct FitConfig {
  std::string manifest;
  std::string out_dir;
  LoadOptions load;
  FitOptions fit;
};

struct TestConfig {
  std::string manifest;
  std::string omega_csv;  // empty: fit inline using `fit`
  std::string out_dir;
  LoadOptions load;
  FitOptions fit;
  double alpha = 0.1;
  bool theory_split = false;
  double v_floor = 1e-8;
  long ci_i = 0, ci_j = 0;  // 1-based pair for a single interval; 0 = off
  double ci_level = 0.95;
};

struct SimulateConfig {
  SimConfig base;  // n, p, K, n_k, design, divergence density
  std::vector<long> informative_list = {3};
  std::vector<double> r_list = {10.0};
  std::vector<std::string> methods = {"clime", "trans-clime"};
  long reps = 20;
  int parallel = 1;
  double alpha = 0.1;
  bool theory_split = false;
  long n_test = 100;
  std::uint64_t master_seed = 0;
  double c_n = 0.0;  // fixed c_n skips cross-validation
  std::vector<double> cn_grid;
  int cv_folds = 5;
  double split_fraction = 2.0 / 3.0;
  std::string out_dir;
};

// Shared method dispatch for fit/test/simulate.
PrecisionEstimate fit_method(const Dataset& ds, const FitOptions& fit, double c_n);

int cmd_datagen(const DatagenConfig& cfg);
int cmd_fit(const FitConfig& cfg);
int cmd_test(const TestConfig& cfg);
int cmd_simulate(const SimulateConfig& cfg);

}  // namespace transclime

#endif  // TRANSCLIME_COMMANDS_HPP_
