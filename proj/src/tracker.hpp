// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geometry.hpp"
#include "kalman.hpp"

namespace dtrack {

struct AssociationConfig {
  double embedding_distance_threshold = 0.4;  // cosine distance gate
  double motion_gate_threshold = 9.4877;      // chi-square 0.95 quantile, 4 dof
  double fusion_lambda = 0.98;                // weight on appearance in the fused cost
  double iou_fallback_threshold = 0.5;        // stage-2 minimum IoU
  int max_age = 30;                           // frames a lost tracklet survives
  int n_init = 3;                             // consecutive hits to confirm
  double embedding_ema_momentum = 0.9;

  void validate() const;
};

enum class TrackStatus { kTentative, kConfirmed, kLost };

/// Online state of one track: motion state, smoothed appearance, lifecycle.
struct Tracklet {
  long long track_id = 0;
  KalmanState state;
  Embedding embedding;  // unit norm, or degenerate when no appearance seen
  TrackStatus status = TrackStatus::kTentative;
  int hits = 0;               // consecutive matches
  int time_since_update = 0;  // frames since the last match

  Box predicted_box() const;
};

BoxMeasurement box_to_measurement(const Box& b);
Box measurement_to_box(const BoxMeasurement& m);

/// EMA smoothing of the track appearance; the result is re-normalized.
Embedding update_embedding(const Embedding& current, const Embedding& incoming, double momentum);

/// Fused appearance+motion costs. Entry = lambda * cosine_distance +
/// (1-lambda) * (gating / gate_threshold, capped at 1); forbidden when either
/// the motion gate or the appearance gate rejects the pair. Degenerate
/// embeddings cost the no-information cosine distance 1.
Eigen::MatrixXd cost_matrix(const std::vector<Tracklet>& tracklets,
                            const std::vector<ScoredDetection>& detections,
                            const KalmanFilter& kf, const AssociationConfig& cfg);

struct AssociationResult {
  std::vector<std::pair<int, int>> matches;  // (tracklet index, detection index)
  std::vector<int> unmatched_tracklets;
  std::vector<int> unmatched_detections;
};

/// Two-stage cascade: Hungarian on the fused cost over confirmed (and lost)
/// tracklets, then Hungarian on 1-IoU over everything left, tentative
/// tracklets included, with pairs below the IoU threshold forbidden.
AssociationResult associate(const std::vector<Tracklet>& tracklets,
                            const std::vector<ScoredDetection>& detections,
                            const KalmanFilter& kf, const AssociationConfig& cfg);

struct TrackOutput {
  long long track_id = 0;
  Box box;
  double score = 1.0;
};

/// Online tracker: predict, associate, update, manage the tracklet pool.
/// Track ids increase monotonically and are never reused. Single-threaded
/// mutable state; run one instance per sequence.
class Tracker {
 public:
  explicit Tracker(const AssociationConfig& cfg = {},
                   const KalmanFilter::Params& kf_params = {});

  /// Advances one frame. Detections must already be post-processed; non
  /// degenerate embeddings are normalized on entry. Returns the confirmed
  /// tracklets updated this frame.
  std::vector<TrackOutput> step(const std::vector<ScoredDetection>& detections);

  const std::vector<Tracklet>& tracklets() const { return tracklets_; }
  int frame_count() const { return frame_count_; }

 private:
  AssociationConfig cfg_;
  KalmanFilter kf_;
  std::vector<Tracklet> tracklets_;
  long long next_id_ = 1;
  int frame_count_ = 0;
};

}  // namespace dtrack
