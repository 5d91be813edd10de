#include "transclime/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "transclime/csv.hpp"
#include "transclime/eval.hpp"
#include "transclime/inference.hpp"
#include "transclime/parallel.hpp"

namespace transclime {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json sim_config_json(const SimConfig& sim) {
  return json{{"design", design_name(sim.design)},
              {"n", sim.n},
              {"p", sim.p},
              {"K", sim.K},
              {"n_k", sim.n_k},
              {"num_informative", sim.num_informative},
              {"r", sim.r},
              {"divergence_density", sim.divergence_density},
              {"seed", sim.seed}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path);
  }
  out << j.dump(2) << '\n';
}

Matrix invert_pd(const Matrix& omega) {
  return Eigen::LLT<Matrix>(symmetrize(omega))
      .solve(Matrix::Identity(omega.rows(), omega.cols()));
}

// Assembles the dataset for one simulated replication. Sample streams are
// per study, so changing K or num_informative leaves the target samples
// untouched.
Dataset sample_dataset(const GroundTruth& gt, const SimConfig& sim) {
  Dataset ds;
  Rng target_rng(derive_seed(sim.seed, 1));
  ds.target = StudyData{sample_mvn(gt.sigma, sim.n, target_rng), "target"};
  for (long k = 0; k < sim.K; ++k) {
    Rng aux_rng(derive_seed(sim.seed, 2 + static_cast<std::uint64_t>(k)));
    const Matrix sigma_k = invert_pd(gt.aux_omegas[static_cast<std::size_t>(k)]);
    ds.auxiliaries.push_back(
        StudyData{sample_mvn(sigma_k, sim.n_k, aux_rng), "aux" + std::to_string(k + 1)});
  }
  ds.informative_labels = gt.informative_labels;
  ds.variable_names = default_header(sim.p);
  return ds;
}

double resolve_cn(const Dataset& ds, const FitOptions& fit) {
  if (fit.c_n > 0.0) return fit.c_n;
  TuningConfig tcfg;
  tcfg.solver = L1SolveConfig{};
  tcfg.num_threads = fit.threads;
  const std::vector<double> grid = fit.cn_grid.empty() ? default_cn_grid() : fit.cn_grid;
  return tune_cn(ds, grid, fit.cv_folds, derive_seed(fit.seed, 7), tcfg);
}

}  // namespace

PrecisionEstimate fit_method(const Dataset& ds, const FitOptions& fit, double c_n) {
  TuningConfig tcfg;
  tcfg.c_n = c_n;
  tcfg.split_fraction = fit.split_fraction;
  tcfg.split_enabled = fit.split_enabled;
  tcfg.seed = derive_seed(fit.seed, 8);
  tcfg.num_threads = fit.threads;
  if (fit.method == "clime") {
    const Matrix sigma = sample_covariance(ds.target.samples);
    PrecisionEstimate est = clime(sigma, lambda_cl_rule(c_n, ds.p(), ds.target.n()),
                                  tcfg.solver, fit.threads);
    est.lambdas.c_n = c_n;
    return est;
  }
  if (fit.method == "trans-clime") {
    return trans_clime(ds, tcfg);
  }
  if (fit.method == "pooled") {
    return trans_clime_pooled(ds, tcfg);
  }
  throw std::invalid_argument("unknown method '" + fit.method + "'");
}

int cmd_datagen(const DatagenConfig& cfg) {
  const GroundTruth gt = build_ground_truth(cfg.sim);
  const Dataset ds = sample_dataset(gt, cfg.sim);

  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  const auto header = default_header(cfg.sim.p);

  write_matrix_csv((dir / "omega.csv").string(), gt.omega, header);
  write_matrix_csv((dir / "target.csv").string(), ds.target.samples, header);
  json aux_entries = json::array();
  for (long k = 0; k < cfg.sim.K; ++k) {
    const std::string omega_name = "aux_omega_" + std::to_string(k + 1) + ".csv";
    const std::string sample_name = "aux_" + std::to_string(k + 1) + ".csv";
    write_matrix_csv((dir / omega_name).string(),
                     gt.aux_omegas[static_cast<std::size_t>(k)], header);
    write_matrix_csv((dir / sample_name).string(),
                     ds.auxiliaries[static_cast<std::size_t>(k)].samples, header);
    aux_entries.push_back({{"path", sample_name}, {"label", "aux" + std::to_string(k + 1)}});
  }
  write_json((dir / "manifest.json").string(),
             json{{"schema_version", kSchemaVersion},
                  {"target", "target.csv"},
                  {"auxiliaries", aux_entries},
                  {"informative", gt.informative_labels}});
  write_json((dir / "truth.json").string(),
             json{{"schema_version", kSchemaVersion},
                  {"config", sim_config_json(cfg.sim)},
                  {"empirical_h", gt.empirical_h},
                  {"informative_labels", gt.informative_labels}});
  std::printf("empirical_h %.6f\n", gt.empirical_h);
  return 0;
}

int cmd_fit(const FitConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  json echo{{"schema_version", kSchemaVersion},
            {"manifest", cfg.manifest},
            {"method", cfg.fit.method},
            {"seed", cfg.fit.seed},
            {"split_fraction", cfg.fit.split_fraction},
            {"split_enabled", cfg.fit.split_enabled},
            {"cv_folds", cfg.fit.cv_folds},
            {"center", cfg.load.center},
            {"standardize", cfg.load.standardize}};
  try {
    const Dataset ds = load_dataset(cfg.manifest, cfg.load);
    const double c_n = resolve_cn(ds, cfg.fit);
    const PrecisionEstimate est = fit_method(ds, cfg.fit, c_n);
    write_matrix_csv((dir / "omega_hat.csv").string(), est.omega, ds.variable_names);
    echo["c_n"] = c_n;
    echo["fitted_method"] = est.method;
    echo["lambdas"] = {{"lambda_cl", est.lambdas.lambda_cl},
                       {"lambda_delta", est.lambdas.lambda_delta},
                       {"lambda_theta", est.lambdas.lambda_theta}};
    echo["split_seed"] = est.split_seed;
    echo["n"] = ds.target.n();
    echo["p"] = ds.p();
    write_json((dir / "fit.json").string(), echo);
    return 0;
  } catch (const std::exception& e) {
    echo["error"] = e.what();
    write_json((dir / "fit.json").string(), echo);
    std::fprintf(stderr, "fit failed: %s\n", e.what());
    return 1;
  }
}

namespace {

struct DebiasInput {
  Matrix sigma;
  long n = 0;
};

DebiasInput debias_covariance(const Matrix& target_samples, bool theory_split,
                              double split_fraction, std::uint64_t fit_seed) {
  if (!theory_split) {
    return {sample_covariance(target_samples), target_samples.rows()};
  }
  const SplitIndices split =
      split_target(target_samples.rows(), split_fraction, derive_seed(fit_seed, 8));
  const Matrix held_out = rows_of(target_samples, split.agg_idx);
  return {sample_covariance(held_out), held_out.rows()};
}

}  // namespace

int cmd_test(const TestConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  json echo{{"schema_version", kSchemaVersion},
            {"manifest", cfg.manifest},
            {"alpha", cfg.alpha},
            {"theory_split", cfg.theory_split},
            {"seed", cfg.fit.seed}};
  try {
    const Dataset ds = load_dataset(cfg.manifest, cfg.load);
    Matrix omega;
    if (!cfg.omega_csv.empty()) {
      omega = read_matrix_csv(cfg.omega_csv);
      echo["omega_source"] = cfg.omega_csv;
    } else {
      const double c_n = resolve_cn(ds, cfg.fit);
      const PrecisionEstimate est = fit_method(ds, cfg.fit, c_n);
      omega = est.omega;
      echo["omega_source"] = "inline fit (" + est.method + ")";
      echo["c_n"] = c_n;
    }
    if (omega.rows() != ds.p()) {
      throw std::invalid_argument("estimate dimension does not match dataset");
    }

    const DebiasInput dbx = debias_covariance(ds.target.samples, cfg.theory_split,
                                               cfg.fit.split_fraction, cfg.fit.seed);
    const InferenceResult res =
        run_inference(omega, dbx.sigma, dbx.n, cfg.v_floor);
    const double t_hat = fdr_threshold(res.z, cfg.alpha);
    const EdgeReport report = detect_edges(res.z, t_hat, cfg.alpha);

    write_matrix_csv((dir / "omega_db.csv").string(), res.omega_db, ds.variable_names);
    write_matrix_csv((dir / "v_hat.csv").string(), res.v_hat, ds.variable_names);
    write_matrix_csv((dir / "z.csv").string(), res.z, ds.variable_names);
    {
      std::ofstream out(dir / "edges.csv");
      out << "i,j,var_i,var_j,z,omega_db\n";
      for (const auto& [i, j] : report.rejected) {
        out << (i + 1) << ',' << (j + 1) << ','
            << ds.variable_names[static_cast<std::size_t>(i)] << ','
            << ds.variable_names[static_cast<std::size_t>(j)] << ','
            << format_double(res.z(i, j)) << ',' << format_double(res.omega_db(i, j))
            << '\n';
      }
    }
    echo["n_debias"] = res.n_debias;
    echo["t_hat"] = t_hat;
    echo["q_total"] = report.q_total;
    echo["n_rejected"] = static_cast<long>(report.rejected.size());

    if (cfg.ci_i >= 1 && cfg.ci_j >= 1) {
      const long i = cfg.ci_i - 1, j = cfg.ci_j - 1;
      if (i >= ds.p() || j >= ds.p()) {
        throw std::invalid_argument("--ci indices out of range");
      }
      const auto [lo, hi] = confidence_interval(res.omega_db(i, j), res.v_hat(i, j),
                                                res.n_debias, 1.0 - cfg.ci_level);
      std::printf("ci %ld %ld level %.4f: %.8f %.8f\n", cfg.ci_i, cfg.ci_j,
                  cfg.ci_level, lo, hi);
      echo["ci"] = {{"i", cfg.ci_i}, {"j", cfg.ci_j},
                    {"level", cfg.ci_level}, {"lo", lo}, {"hi", hi}};
    }
    write_json((dir / "test.json").string(), echo);
    std::printf("t_hat %.6f rejected %zu of %ld\n", t_hat, report.rejected.size(),
                report.q_total);
    return 0;
  } catch (const std::exception& e) {
    echo["error"] = e.what();
    write_json((dir / "test.json").string(), echo);
    std::fprintf(stderr, "test failed: %s\n", e.what());
    return 1;
  }
}

namespace {

struct CellKey {
  long num_informative;
  double r;
};

struct RepResult {
  std::vector<Scorecard> rows;  // one per (cell, method), fixed order
  bool failed = false;
  std::string error;
};

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

}  // namespace

int cmd_simulate(const SimulateConfig& cfg) {
  if (cfg.reps < 1) {
    throw std::invalid_argument("cmd_simulate: reps must be >= 1");
  }
  for (const auto& m : cfg.methods) {
    if (m != "clime" && m != "trans-clime" && m != "pooled") {
      throw std::invalid_argument("cmd_simulate: unknown method '" + m + "'");
    }
  }
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  std::vector<CellKey> cells;
  for (long ni : cfg.informative_list) {
    for (double r : cfg.r_list) cells.push_back({ni, r});
  }

  std::vector<RepResult> results(static_cast<std::size_t>(cfg.reps));

  auto run_rep = [&](long rep) {
    RepResult& out = results[static_cast<std::size_t>(rep)];
    const std::uint64_t rep_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(rep));
    try {
      // target data are identical across cells: tune once per replication
      SimConfig sim = cfg.base;
      sim.seed = rep_seed;
      double c_n = cfg.c_n;
      if (c_n <= 0.0) {
        const Matrix omega0 = sim.design == Design::Banded
                                  ? banded_precision(sim.p)
                                  : block_toeplitz_precision(sim.p);
        Dataset target_only;
        Rng target_rng(derive_seed(rep_seed, 1));
        target_only.target =
            StudyData{sample_mvn(invert_pd(omega0), sim.n, target_rng), "target"};
        TuningConfig tcfg;
        const std::vector<double> grid =
            cfg.cn_grid.empty() ? default_cn_grid() : cfg.cn_grid;
        c_n = tune_cn(target_only, grid, cfg.cv_folds, derive_seed(rep_seed, 7), tcfg);
      }

      for (const CellKey& cell : cells) {
        sim.num_informative = cell.num_informative;
        sim.r = cell.r;
        const GroundTruth gt = build_ground_truth(sim);
        const Dataset ds = sample_dataset(gt, sim);
        Rng test_rng(derive_seed(rep_seed, 999));
        const Matrix x_test = sample_mvn(gt.sigma, cfg.n_test, test_rng);

        FitOptions fit;
        fit.c_n = c_n;
        fit.split_fraction = cfg.split_fraction;
        fit.seed = rep_seed;
        fit.threads = 1;

        const DebiasInput dbx = debias_covariance(
            ds.target.samples, cfg.theory_split, cfg.split_fraction, rep_seed);

        for (const auto& method : cfg.methods) {
          fit.method = method;
          const PrecisionEstimate est = fit_method(ds, fit, c_n);
          const InferenceResult inf = run_inference(est.omega, dbx.sigma, dbx.n);
          const double t_hat = fdr_threshold(inf.z, cfg.alpha);
          const EdgeReport report = detect_edges(inf.z, t_hat, cfg.alpha);
          const auto [fdp, power] = fdp_power(report, gt.omega);

          Scorecard card;
          card.method = method;
          card.rep = rep;
          card.seed = rep_seed;
          card.c_n = c_n;
          card.frob_err = frobenius_error(est.omega, gt.omega);
          card.pred_err = prediction_error(est.omega, x_test);
          card.fdp = fdp;
          card.power = power;
          card.t_hat = t_hat;
          card.n_rejected = static_cast<long>(report.rejected.size());
          out.rows.push_back(std::move(card));
        }
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      out.rows.clear();
    }
  };

  parallel_for(cfg.reps, cfg.parallel, run_rep);

  long failures = 0;
  for (const auto& res : results) {
    if (res.failed) {
      ++failures;
      std::fprintf(stderr, "replication failed: %s\n", res.error.c_str());
    }
  }

  const std::vector<std::string> rep_header = {
      "schema_version", "design", "p", "n", "K", "n_k", "num_informative", "r",
      "rep", "seed", "method", "c_n", "frob_err", "pred_err", "fdp", "power",
      "t_hat", "n_rejected"};
  std::ofstream reps_out(dir / "replications.csv");
  reps_out << csv_join(rep_header) << '\n';
  for (long rep = 0; rep < cfg.reps; ++rep) {
    const RepResult& res = results[static_cast<std::size_t>(rep)];
    if (res.failed) continue;
    std::size_t row = 0;
    for (const CellKey& cell : cells) {
      for (const auto& method : cfg.methods) {
        const Scorecard& card = res.rows[row++];
        (void)method;
        reps_out << csv_join({std::to_string(kSchemaVersion),
                              design_name(cfg.base.design),
                              std::to_string(cfg.base.p), std::to_string(cfg.base.n),
                              std::to_string(cfg.base.K), std::to_string(cfg.base.n_k),
                              std::to_string(cell.num_informative), format_double(cell.r),
                              std::to_string(card.rep), std::to_string(card.seed),
                              card.method, format_double(card.c_n),
                              format_double(card.frob_err), format_double(card.pred_err),
                              format_double(card.fdp), format_double(card.power),
                              format_double(card.t_hat), std::to_string(card.n_rejected)})
                 << '\n';
      }
    }
  }
  reps_out.close();

  // aggregate per (cell, method), replications in fixed order
  std::ofstream agg_out(dir / "aggregate.csv");
  agg_out << csv_join({"schema_version", "design", "p", "n", "K", "n_k",
                       "num_informative", "r", "method", "reps_requested", "reps_done",
                       "frob_err_mean", "frob_err_se", "pred_err_mean", "pred_err_se",
                       "fdp_mean", "fdp_se", "power_mean", "power_se"})
          << '\n';
  std::size_t cell_index = 0;
  for (const CellKey& cell : cells) {
    std::size_t method_index = 0;
    for (const auto& method : cfg.methods) {
      std::vector<const Scorecard*> picks;
      for (long rep = 0; rep < cfg.reps; ++rep) {
        const RepResult& res = results[static_cast<std::size_t>(rep)];
        if (res.failed) continue;
        picks.push_back(&res.rows[cell_index * cfg.methods.size() + method_index]);
      }
      auto mean_se = [&](auto getter) -> std::pair<std::string, std::string> {
        const long m = static_cast<long>(picks.size());
        if (m == 0) return {"", ""};
        double mean = 0.0;
        for (const auto* c : picks) mean += getter(*c);
        mean /= static_cast<double>(m);
        if (m < 2) return {format_double(mean), ""};
        double ss = 0.0;
        for (const auto* c : picks) {
          const double d = getter(*c) - mean;
          ss += d * d;
        }
        const double se = std::sqrt(ss / static_cast<double>(m - 1)) /
                          std::sqrt(static_cast<double>(m));
        return {format_double(mean), format_double(se)};
      };
      const auto [fm, fse] = mean_se([](const Scorecard& c) { return c.frob_err; });
      const auto [pm, pse] = mean_se([](const Scorecard& c) { return c.pred_err; });
      const auto [dm, dse] = mean_se([](const Scorecard& c) { return c.fdp; });
      const auto [wm, wse] = mean_se([](const Scorecard& c) { return c.power; });
      agg_out << csv_join({std::to_string(kSchemaVersion), design_name(cfg.base.design),
                           std::to_string(cfg.base.p), std::to_string(cfg.base.n),
                           std::to_string(cfg.base.K), std::to_string(cfg.base.n_k),
                           std::to_string(cell.num_informative), format_double(cell.r),
                           method, std::to_string(cfg.reps),
                           std::to_string(static_cast<long>(picks.size())), fm, fse, pm,
                           pse, dm, dse, wm, wse})
              << '\n';
      ++method_index;
    }
    ++cell_index;
  }
  agg_out.close();

  json echo{{"schema_version", kSchemaVersion},
            {"command", "simulate"},
            {"base", sim_config_json(cfg.base)},
            {"informative_list", cfg.informative_list},
            {"r_list", cfg.r_list},
            {"methods", cfg.methods},
            {"reps", cfg.reps},
            {"parallel", cfg.parallel},
            {"alpha", cfg.alpha},
            {"theory_split", cfg.theory_split},
            {"n_test", cfg.n_test},
            {"master_seed", cfg.master_seed},
            {"c_n", cfg.c_n},
            {"cv_folds", cfg.cv_folds},
            {"split_fraction", cfg.split_fraction},
            {"failures", failures}};
  write_json((dir / "config.json").string(), echo);

  std::printf("simulate: %ld/%ld replications succeeded, outputs in %s\n",
              cfg.reps - failures, cfg.reps, cfg.out_dir.c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace transclime
