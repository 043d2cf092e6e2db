// SPDX-License-Identifier: Apache-2.0
//
// nearswipt - link-level simulator for simultaneous wireless information and
// power transfer with gigantic planar antenna arrays
// Copyright (C) 2026 the nearswipt developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nearswipt/config.hpp"
#include "nearswipt/simharness.hpp"

namespace {

namespace fs = std::filesystem;
using namespace nearswipt;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return buffer.str();
}

struct RunOptions {
  std::string experiment;
  std::string config_path;
  std::string out_dir = ".";
  std::size_t trials = 0;  // 0 = keep the configured value
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
  bool threads_set = false;
};

int do_run(const RunOptions& opt) {
  const ExperimentId id = experiment_from_string(opt.experiment);

  ExperimentSpec spec = opt.config_path.empty()
                            ? ExperimentSpec::defaults_for(id)
                            : apply_config_json(id, read_file(opt.config_path));
  if (opt.trials > 0) spec.system.trials = opt.trials;
  if (opt.seed_set) spec.system.master_seed = opt.seed;
  if (opt.threads_set) spec.threads = opt.threads;
  spec.validate();

  fs::create_directories(opt.out_dir);
  const fs::path out(opt.out_dir);

  std::cout << "running " << to_string(id) << " (" << spec.system.trials
            << " trials, seed " << spec.system.master_seed << ")" << std::endl;

  const ExperimentResult result = run_experiment(spec);
  const std::vector<SummaryRow> summary = summarize(result);

  write_records_csv(result, (out / "records.csv").string());
  write_summary_csv(summary, (out / "summary.csv").string());
  write_meta(spec, (out / "meta.txt").string());

  std::cout << "wrote " << result.records.size() << " records over " << summary.size()
            << " sweep points to " << out.string() << std::endl;
  for (const SummaryRow& row : summary) {
    std::printf("  %-52s outage %.3f", row.sweep_point.c_str(), row.outage_rate);
    if (std::isfinite(row.mean_sum_se)) std::printf("  sum_se %.3f", row.mean_sum_se);
    if (std::isfinite(row.mean_net_w)) std::printf("  net %.3e W", row.mean_net_w);
    std::printf("\n");
  }
  return 0;
}

int do_validate(const std::string& path, std::string experiment) {
  const std::string text = read_file(path);
  if (experiment.empty()) {
    const auto embedded = config_experiment(text);
    if (!embedded)
      throw std::invalid_argument(
          "config has no 'experiment' key; pass --experiment <id>");
    experiment = to_string(*embedded);
  }
  const ExperimentSpec spec = apply_config_json(experiment_from_string(experiment), text);
  std::cout << "ok: valid " << to_string(spec.id) << " configuration\n"
            << spec_to_json_text(spec) << std::endl;
  return 0;
}

struct CurveOptions {
  std::string curve = "sigmoid";
  double saturation_w = EhModelParams{}.saturation_w;
  double steepness_per_w = EhModelParams{}.steepness_per_w;
  double inflection_w = EhModelParams{}.inflection_w;
  double efficiency = 0.5;
  double max_rf_w = 70e-3;
  std::size_t points = 400;
  std::string out_path;
};

int do_curves(const CurveOptions& opt) {
  EhModel model;
  if (opt.curve == "sigmoid") model.curve = EhCurve::sigmoid;
  else if (opt.curve == "linear") model.curve = EhCurve::linear;
  else throw std::invalid_argument("unknown curve '" + opt.curve + "'");
  model.params.saturation_w = opt.saturation_w;
  model.params.steepness_per_w = opt.steepness_per_w;
  model.params.inflection_w = opt.inflection_w;
  model.linear_efficiency = opt.efficiency;
  model.params.validate();

  if (opt.out_path.empty()) {
    write_eh_curve_csv(std::cout, model, opt.max_rf_w, opt.points);
  } else {
    std::ofstream os(opt.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + opt.out_path + "' for writing");
    write_eh_curve_csv(os, model, opt.max_rf_w, opt.points);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Trials are parallelized one level up; keep the BLAS single-threaded
  // unless the user says otherwise.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  setenv("OMP_NUM_THREADS", "1", 0);

  CLI::App app{"nearswipt: near-field SWIPT link simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand(
      "run", "run an experiment (band_sweep, near_vs_far, estimator_cdf, tradeoff)");
  run->add_option("experiment", run_opt.experiment, "experiment id")->required();
  run->add_option("--config", run_opt.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  run->add_option("--trials", run_opt.trials, "override the trial count");
  CLI::Option* seed_opt = run->add_option("--seed", run_opt.seed, "override the master seed");
  CLI::Option* threads_opt =
      run->add_option("--threads", run_opt.threads, "worker threads (0 = all cores)");
  run->add_option("--out", run_opt.out_dir, "output directory");

  std::string validate_path, validate_experiment;
  CLI::App* validate = app.add_subcommand("validate-config", "check a JSON config file");
  validate->add_option("file", validate_path, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  validate->add_option("--experiment", validate_experiment,
                       "experiment id (defaults to the config's 'experiment' key)");

  CurveOptions curve_opt;
  bool eh_flag = false;
  CLI::App* curves = app.add_subcommand("curves", "dump model transfer curves as CSV");
  curves->add_flag("--eh-model", eh_flag, "rectifier input/output curve");
  curves->add_option("--curve", curve_opt.curve, "sigmoid or linear");
  curves->add_option("--saturation-w", curve_opt.saturation_w, "saturation level [W]");
  curves->add_option("--steepness-per-w", curve_opt.steepness_per_w, "logistic slope [1/W]");
  curves->add_option("--inflection-w", curve_opt.inflection_w, "inflection point [W]");
  curves->add_option("--efficiency", curve_opt.efficiency, "linear-mode efficiency");
  curves->add_option("--max-rf-w", curve_opt.max_rf_w, "largest sampled RF input [W]");
  curves->add_option("--points", curve_opt.points, "number of samples");
  curves->add_option("--out", curve_opt.out_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      run_opt.seed_set = seed_opt->count() > 0;
      run_opt.threads_set = threads_opt->count() > 0;
      return do_run(run_opt);
    }
    if (validate->parsed()) return do_validate(validate_path, validate_experiment);
    if (curves->parsed()) {
      if (!eh_flag) throw std::invalid_argument("curves: nothing selected, pass --eh-model");
      return do_curves(curve_opt);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return 1;
  }
  return 0;
}
