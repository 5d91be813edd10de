#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transclime/commands.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("TRANSCLIME_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // resolved to hardware concurrency downstream
}

void add_fit_options(CLI::App* app, transclime::FitOptions* fit,
                     transclime::LoadOptions* load) {
  app->add_option("--method", fit->method, "clime | trans-clime | pooled")
      ->check(CLI::IsMember({"clime", "trans-clime", "pooled"}));
  app->add_option("--cn", fit->c_n,
                  "fixed tuning constant c_n (omit to cross-validate)");
  app->add_option("--cn-grid", fit->cn_grid, "cross-validation grid for c_n");
  app->add_option("--cv-folds", fit->cv_folds, "cross-validation folds")
      ->check(CLI::Range(2, 20));
  app->add_option("--split-fraction", fit->split_fraction,
                  "target fraction used for the fit fold");
  app->add_flag_function(
      "--no-split",
      [fit](std::int64_t) { fit->split_enabled = false; },
      "fit and aggregate on all target data (drops the independence device)");
  app->add_option("--seed", fit->seed, "seed for splits and cross-validation");
  app->add_option("--threads", fit->threads, "column-solve worker threads");
  app->add_flag("--center", load->center, "subtract per-column means per study");
  app->add_flag("--standardize", load->standardize,
                "scale columns to unit standard deviation per study");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trans-CLIME: Gaussian graphical model estimation with "
               "transfer learning, debiased inference, and FDR-controlled "
               "edge detection"};
  app.require_subcommand(1);

  // datagen
  transclime::DatagenConfig dg;
  std::string dg_design = "block-toeplitz";
  auto* datagen = app.add_subcommand("datagen", "generate a synthetic multi-study dataset");
  datagen->add_option("--design", dg_design, "banded | block-toeplitz");
  datagen->add_option("--p", dg.sim.p, "dimension")->check(CLI::PositiveNumber);
  datagen->add_option("--n", dg.sim.n, "target sample size")->check(CLI::PositiveNumber);
  datagen->add_option("--K", dg.sim.K, "number of auxiliary studies");
  datagen->add_option("--nk", dg.sim.n_k, "auxiliary sample size");
  datagen->add_option("--r", dg.sim.r, "divergence scale");
  datagen->add_option("--informative", dg.sim.num_informative,
                      "number of informative auxiliaries");
  datagen->add_option("--density", dg.sim.divergence_density,
                      "divergence nonzero probability");
  datagen->add_option("--seed", dg.sim.seed, "seed");
  datagen->add_option("--out", dg.out_dir, "output directory")->required();

  // fit
  transclime::FitConfig fc;
  fc.fit.threads = default_threads();
  auto* fit = app.add_subcommand("fit", "fit a precision matrix estimate");
  fit->add_option("--data", fc.manifest, "dataset manifest JSON")->required();
  fit->add_option("--out", fc.out_dir, "output directory")->required();
  add_fit_options(fit, &fc.fit, &fc.load);

  // test
  transclime::TestConfig tc;
  tc.fit.threads = default_threads();
  std::vector<long> ci_pair;
  auto* test = app.add_subcommand("test", "debiased inference and edge detection");
  test->add_option("--data", tc.manifest, "dataset manifest JSON")->required();
  test->add_option("--omega", tc.omega_csv, "estimate CSV (omit to fit inline)");
  test->add_option("--out", tc.out_dir, "output directory")->required();
  test->add_option("--alpha", tc.alpha, "FDR level");
  test->add_flag("--theory-split", tc.theory_split,
                 "debias with the held-out fold covariance");
  test->add_option("--ci", ci_pair, "row and column (1-based) for one interval")
      ->expected(2);
  test->add_option("--level", tc.ci_level, "confidence level for --ci");
  add_fit_options(test, &tc.fit, &tc.load);

  // simulate
  transclime::SimulateConfig sc;
  std::string sc_design = "block-toeplitz";
  std::string profile;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo benchmark campaign");
  simulate->add_option("--profile", profile,
                       "desk (p=50,n=120,K=3,nk=240,reps=20) or "
                       "paper (p=200,n=150,K=5,nk=300)")
      ->check(CLI::IsMember({"desk", "paper"}));
  simulate->add_option("--design", sc_design, "banded | block-toeplitz");
  simulate->add_option("--p", sc.base.p, "dimension");
  simulate->add_option("--n", sc.base.n, "target sample size");
  simulate->add_option("--K", sc.base.K, "number of auxiliary studies");
  simulate->add_option("--nk", sc.base.n_k, "auxiliary sample size");
  simulate->add_option("--r", sc.r_list, "divergence scales (repeatable)");
  simulate->add_option("--informative", sc.informative_list,
                       "informative counts (repeatable)");
  simulate->add_option("--density", sc.base.divergence_density,
                       "divergence nonzero probability");
  simulate->add_option("--methods", sc.methods, "subset of clime trans-clime pooled");
  simulate->add_option("--reps", sc.reps, "replications");
  simulate->add_option("--alpha", sc.alpha, "FDR level");
  simulate->add_flag("--theory-split", sc.theory_split,
                     "debias with the held-out fold covariance");
  simulate->add_option("--ntest", sc.n_test, "held-out test sample size");
  simulate->add_option("--seed", sc.master_seed, "master seed");
  simulate->add_option("--cn", sc.c_n, "fixed c_n (omit to cross-validate per rep)");
  simulate->add_option("--cn-grid", sc.cn_grid, "cross-validation grid");
  simulate->add_option("--cv-folds", sc.cv_folds, "cross-validation folds");
  simulate->add_option("--split-fraction", sc.split_fraction, "fit-fold fraction");
  simulate->add_option("--parallel", sc.parallel, "replications run concurrently");
  simulate->add_option("--out", sc.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (datagen->parsed()) {
      dg.sim.design = transclime::design_from_name(dg_design);
      return transclime::cmd_datagen(dg);
    }
    if (fit->parsed()) {
      return transclime::cmd_fit(fc);
    }
    if (test->parsed()) {
      if (ci_pair.size() == 2) {
        tc.ci_i = ci_pair[0];
        tc.ci_j = ci_pair[1];
      }
      return transclime::cmd_test(tc);
    }
    if (simulate->parsed()) {
      // profile presets only fill options the user left untouched
      if (!profile.empty()) {
        const bool desk = profile == "desk";
        if (!simulate->count("--p")) sc.base.p = desk ? 50 : 200;
        if (!simulate->count("--n")) sc.base.n = desk ? 120 : 150;
        if (!simulate->count("--K")) sc.base.K = desk ? 3 : 5;
        if (!simulate->count("--nk")) sc.base.n_k = desk ? 240 : 300;
        if (desk && !simulate->count("--reps")) sc.reps = 20;
      }
      sc.base.design = transclime::design_from_name(sc_design);
      if (sc.parallel <= 0) sc.parallel = default_threads();
      if (sc.parallel <= 0) sc.parallel = 1;
      return transclime::cmd_simulate(sc);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
