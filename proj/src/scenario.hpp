// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "metrics.hpp"
#include "mot_io.hpp"

namespace dtrack {

/// Synthetic multi-object scene: per-identity constant-velocity boxes that
/// bounce off the image border, with optional direction changes, occlusion
/// windows, detector noise and false positives.
struct ScenarioConfig {
  int identity_count = 10;
  int frame_count = 100;
  double image_width = 640.0;
  double image_height = 480.0;
  double box_height_min = 36.0;
  double box_height_max = 64.0;
  double box_aspect_min = 0.35;  // w/h
  double box_aspect_max = 0.55;
  double speed_min = 1.0;
  double speed_max = 3.5;
  double direction_change_prob = 0.02;
  int occlusion_count = 0;      // windows where an identity disappears
  int occlusion_length = 0;     // frames per window
  double detection_noise_sigma = 0.0;  // px, per box corner
  double dropout_rate = 0.0;
  double false_positive_rate = 0.0;  // per identity slot per frame
  double embedding_noise_sigma = 0.0;
  int embedding_dim = 512;  // teacher dimension carried by detections
  std::uint64_t seed = 1;

  void validate() const;
};

ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

struct Scenario {
  ScenarioConfig config;
  GtSequence gt;  // one frame per index 1..frame_count
  std::vector<std::vector<ScoredDetection>> detections;  // per frame, teacher-dim embeddings
  std::vector<std::vector<long long>> det_identities;    // aligned; false positives get fresh ids
  std::vector<std::vector<std::uint64_t>> det_nonces;    // noise draw key per detection
};

/// Deterministic under the config seed. With zero noise, dropout and false
/// positives the detections equal the ground truth exactly.
Scenario synth_scenario(const ScenarioConfig& cfg);

MotSequence scenario_gt_to_mot(const Scenario& s);
/// Detection rows with the embedding values appended after the 10 MOT fields.
MotSequence scenario_detections_to_mot(const Scenario& s);
/// frame,det_index,identity,nonce rows mapping each detection to its identity.
std::string write_identity_map(const Scenario& s);

struct IdentityMapEntry {
  int frame = 0;
  int det_index = 0;
  long long identity = 0;
  std::uint64_t nonce = 0;
};

std::vector<IdentityMapEntry> parse_identity_map(const std::string& text);

}  // namespace dtrack
