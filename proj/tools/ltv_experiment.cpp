// SPDX-License-Identifier: Apache-2.0
// Monte-Carlo sweep over |U|; writes one CSV row per (|U|, trial).
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltv/experiment.hpp"

int main(int argc, char** argv) {
  ltv::ExperimentConfig cfg;
  std::string mode = "c2";
  std::string placement = "centered";
  std::vector<double> mu{0.0, 0.0};
  std::string out = "ltv_experiment.csv";

  CLI::App app{"Monte-Carlo approximate-eigenstructure experiment"};
  app.add_option("--k-grid", cfg.k_grid, "cells per axis");
  app.add_option("--u-list", cfg.u_measures, "comma-separated |U| sweep")->delimiter(',');
  app.add_option("--trials", cfg.trials, "trials per |U|");
  app.add_option("--seed", cfg.seed, "base seed (LTV_SEED overrides)");
  app.add_option("--p", cfg.error.p, "error norm p");
  app.add_option("--a", cfg.error.a, "spreading norm a (inf allowed)");
  app.add_option("--alpha", cfg.error.alpha, "polarization");
  app.add_option("--mode", mode, "c1 or c2")->check(CLI::IsMember({"c1", "c2"}));
  app.add_option("--mu", mu, "evaluation point T,F")->delimiter(',')->expected(2);
  app.add_option("--subdiv", cfg.subdiv, "quadrature sub-cells per cell side");
  app.add_option("--n-samples", cfg.n_samples, "time samples");
  app.add_option("--dt", cfg.dt, "sampling step");
  app.add_option("--out", out, "output CSV path");
  app.add_option("--threads", cfg.threads, "worker threads");
  app.add_option("--placement", placement, "centered or corner")->check(CLI::IsMember({"centered", "corner"}));
  app.add_flag("--timing", cfg.timing, "fill the wall_time_s column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (const char* env = std::getenv("LTV_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "config error: LTV_SEED is not an unsigned integer: " << env << "\n";
      return 1;
    }
  }
  cfg.error.mode = mode == "c1" ? ltv::Mode::c1 : ltv::Mode::c2;
  cfg.error.mu = ltv::Point2<double>(mu[0], mu[1]);
  cfg.placement = placement == "corner" ? ltv::Placement::corner : ltv::Placement::centered;

  std::vector<ltv::TrialRecord> records;
  try {
    cfg.validate();
    records = ltv::run_experiment(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ltv::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    ltv::emit_csv(records, out);
  } catch (const ltv::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
