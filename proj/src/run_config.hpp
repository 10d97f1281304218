// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <cstdint>
#include <string>

#include "anchors.hpp"
#include "distill.hpp"
#include "losses.hpp"
#include "postprocess.hpp"
#include "toy_head.hpp"
#include "tracker.hpp"

namespace dtrack {

/// Every tunable of the pipeline in one flat key=value document. Defaults are
/// the published operating point; unknown keys are rejected.
struct RunConfig {
  size_t teacher_dim = kDefaultTeacherDim;  // D_t
  size_t student_dim = 128;                 // D_s <= D_t
  std::uint64_t seed = 1;

  AnchorConfig anchors;
  PostprocessConfig postprocess;
  AssociationConfig association;
  LossWeights loss_weights;
  FocalParams focal;
  HuberParams huber;

  // Toy trainer settings (traintoy command).
  int toy_identity_count = 200;
  int toy_samples_per_identity = 10;
  int toy_holdout_per_identity = 2;
  int toy_background_count = 2000;
  int toy_feature_dim = 64;
  int toy_hidden_dim = 256;
  double toy_learning_rate = 0.0015;
  int toy_iterations = 4000;
  int toy_batch_size = 64;

  void validate() const;

  ToyHeadConfig toy_head_config() const;
  ToyDataSpec toy_data_spec() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace dtrack
