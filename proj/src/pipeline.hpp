// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <string>

#include "metrics.hpp"
#include "mot_io.hpp"
#include "run_config.hpp"

namespace dtrack {

GtSequence mot_to_gt(const MotSequence& frames);
HypSequence mot_to_hyp(const MotSequence& frames);

struct DistillSummary {
  size_t record_count = 0;
  size_t teacher_dim = 0;
  size_t base_bytes = 0;
  double overhead = 0.0;
};

/// Distills a MOT detection file into an augmented dataset file. The embedder
/// spec is either "file:<augmented file>" or
/// "oracle:map=<identity map>[,sigma=<s>][,seed=<n>][,dt=<d>]"; oracle
/// defaults come from the run config. Output is written only after the whole
/// dataset distilled, so failures leave no partial file.
DistillSummary run_distill(const std::string& detections_path, const std::string& embedder_spec,
                           const RunConfig& cfg, const std::string& out_path,
                           bool binary = false);

/// Runs the online tracker over a detection file (embedding values appended
/// to each row are truncated to the student dimension and normalized) and
/// writes MOT result rows.
void run_track(const std::string& detections_path, const RunConfig& cfg,
               const std::string& out_path);

/// Evaluates a result file against ground truth; detections_path may be empty
/// (AP omitted). Writes the metric report and returns the evaluation.
SequenceEval run_eval(const std::string& gt_path, const std::string& result_path,
                      const std::string& detections_path, const std::string& report_path);

/// Generates a synthetic scenario into out_dir: gt.txt, det.txt (embedding
/// columns included) and identity_map.txt.
void run_synth(const std::string& scenario_path, const std::string& out_dir);

struct TraintoySummary {
  double initial_le = 0.0;
  double final_le = 0.0;
  double retrieval_top1 = 0.0;
};

/// Trains the toy student head on a generated feature pool and writes the
/// loss curve (iteration 0 carries the pre-training full-pool losses).
TraintoySummary run_traintoy(const RunConfig& cfg, const std::string& losscurve_path);

}  // namespace dtrack
