// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors
//
// Command-line front end. Links the shared C API only; all data goes to
// files, diagnostics to stderr. Exit codes: 0 success, 1 validation failure,
// 2 I/O failure.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtrack/dtrack.h"

namespace {

int status_to_exit_code(dtrack_status status) {
  if (status == DTRACK_OK) return 0;
  if (status == DTRACK_ERR_IO) return 2;
  return 1;
}

int fail(dtrack_status status) {
  std::fprintf(stderr, "error: %s\n", dtrack_last_error());
  return status_to_exit_code(status);
}

using ConfigHandle = std::unique_ptr<dtrack_config, decltype(&dtrack_config_free)>;

// Config from --config plus --set overrides; exits through `status` on error.
ConfigHandle make_config(const std::string& config_path,
                         const std::vector<std::string>& overrides, dtrack_status* status) {
  ConfigHandle cfg(dtrack_config_new(), &dtrack_config_free);
  *status = DTRACK_OK;
  if (!config_path.empty()) {
    *status = dtrack_config_load(cfg.get(), config_path.c_str());
    if (*status != DTRACK_OK) return cfg;
  }
  for (const std::string& kv : overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      *status = DTRACK_ERR_INVALID;
      return cfg;
    }
    *status = dtrack_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (*status != DTRACK_OK) return cfg;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distilltrack: embedding distillation, online tracking and MOT evaluation"};
  app.require_subcommand(1);

  std::string in_path, out_path, embedder_spec, config_path, gt_path, res_path, det_path,
      report_path, scenario_path, out_dir;
  std::vector<std::string> overrides;
  bool binary_layout = false;

  auto* distill = app.add_subcommand("distill", "attach teacher embeddings to a detection file");
  distill->add_option("--in", in_path, "MOT detection file")->required();
  distill->add_option("--embedder", embedder_spec,
                      "file:<augmented file> or oracle:map=<identity map>[,sigma=..][,seed=..]")
      ->required();
  distill->add_option("--out", out_path, "augmented dataset output")->required();
  distill->add_option("--config", config_path, "run config file");
  distill->add_option("--set", overrides, "override config keys (key=value)");
  distill->add_flag("--binary", binary_layout, "write the compact binary layout");

  auto* track = app.add_subcommand("track", "run the online tracker over detections");
  track->add_option("--in", in_path, "MOT detections with embedding columns")->required();
  track->add_option("--config", config_path, "run config file");
  track->add_option("--set", overrides, "override config keys (key=value)");
  track->add_option("--out", out_path, "MOT result file")->required();

  auto* eval = app.add_subcommand("eval", "evaluate tracking results against ground truth");
  eval->add_option("--gt", gt_path, "MOT ground-truth file")->required();
  eval->add_option("--res", res_path, "MOT result file")->required();
  eval->add_option("--det", det_path, "MOT detection file (enables AP)");
  eval->add_option("--report", report_path, "metric report output")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic scenario");
  synth->add_option("--config", scenario_path, "scenario config file")->required();
  synth->add_option("--out-dir", out_dir, "output directory")->required();

  auto* traintoy = app.add_subcommand("traintoy", "train the toy student head");
  traintoy->add_option("--config", config_path, "run config file");
  traintoy->add_option("--set", overrides, "override config keys (key=value)");
  traintoy->add_option("--out", out_path, "loss curve output")->required();

  auto* selftest = app.add_subcommand("selftest", "run built-in oracle checks");
  (void)selftest;

  CLI11_PARSE(app, argc, argv);

  dtrack_status status = DTRACK_OK;

  if (distill->parsed()) {
    const ConfigHandle cfg = make_config(config_path, overrides, &status);
    if (status != DTRACK_OK) return fail(status);
    double overhead = 0.0;
    status = dtrack_run_distill(in_path.c_str(), embedder_spec.c_str(), cfg.get(),
                                out_path.c_str(), binary_layout ? 1 : 0, &overhead);
    if (status != DTRACK_OK) return fail(status);
    std::fprintf(stderr, "distilled %s -> %s (embedding storage overhead: %.2f%% of input)\n",
                 in_path.c_str(), out_path.c_str(), overhead * 100.0);
    return 0;
  }

  if (track->parsed()) {
    const ConfigHandle cfg = make_config(config_path, overrides, &status);
    if (status != DTRACK_OK) return fail(status);
    status = dtrack_run_track(in_path.c_str(), cfg.get(), out_path.c_str());
    if (status != DTRACK_OK) return fail(status);
    return 0;
  }

  if (eval->parsed()) {
    status = dtrack_run_eval(gt_path.c_str(), res_path.c_str(),
                             det_path.empty() ? nullptr : det_path.c_str(),
                             report_path.c_str());
    if (status != DTRACK_OK) return fail(status);
    return 0;
  }

  if (synth->parsed()) {
    status = dtrack_run_synth(scenario_path.c_str(), out_dir.c_str());
    if (status != DTRACK_OK) return fail(status);
    return 0;
  }

  if (traintoy->parsed()) {
    const ConfigHandle cfg = make_config(config_path, overrides, &status);
    if (status != DTRACK_OK) return fail(status);
    dtrack_traintoy_result result{};
    status = dtrack_run_traintoy(cfg.get(), out_path.c_str(), &result);
    if (status != DTRACK_OK) return fail(status);
    std::fprintf(stderr, "toy head: L_e %.6f -> %.6f, retrieval top-1 %.4f\n", result.initial_le,
                 result.final_le, result.retrieval_top1);
    return 0;
  }

  if (selftest->parsed()) {
    status = dtrack_run_selftest();
    if (status != DTRACK_OK) return fail(status);
    return 0;
  }

  return 1;
}
