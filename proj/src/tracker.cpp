// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "tracker.hpp"

#include <algorithm>
#include <cmath>

#include "assignment.hpp"
#include "errors.hpp"

namespace dtrack {

void AssociationConfig::validate() const {
  if (embedding_distance_threshold < 0.0 || embedding_distance_threshold > 2.0) {
    throw ValidationError("association: embedding_distance_threshold must be in [0,2]");
  }
  if (!(motion_gate_threshold > 0.0)) {
    throw ValidationError("association: motion_gate_threshold must be > 0");
  }
  if (fusion_lambda < 0.0 || fusion_lambda > 1.0) {
    throw ValidationError("association: fusion_lambda must be in [0,1]");
  }
  if (!(iou_fallback_threshold > 0.0) || iou_fallback_threshold > 1.0) {
    throw ValidationError("association: iou_fallback_threshold must be in (0,1]");
  }
  if (max_age < 0) throw ValidationError("association: max_age must be >= 0");
  if (n_init < 1) throw ValidationError("association: n_init must be >= 1");
  if (embedding_ema_momentum < 0.0 || embedding_ema_momentum > 1.0) {
    throw ValidationError("association: embedding_ema_momentum must be in [0,1]");
  }
}

BoxMeasurement box_to_measurement(const Box& b) {
  if (!(b.height() > 0.0)) throw ValidationError("box_to_measurement: height must be positive");
  return BoxMeasurement(b.center_x(), b.center_y(), b.width() / b.height(), b.height());
}

Box measurement_to_box(const BoxMeasurement& m) {
  const double h = m[3];
  const double w = m[2] * h;
  return Box{m[0] - 0.5 * w, m[1] - 0.5 * h, m[0] + 0.5 * w, m[1] + 0.5 * h};
}

Box Tracklet::predicted_box() const { return measurement_to_box(state.mean.head<4>()); }

Embedding update_embedding(const Embedding& current, const Embedding& incoming, double momentum) {
  if (is_degenerate(incoming)) return current;
  if (is_degenerate(current)) return normalize_embedding(incoming);
  if (current.size() != incoming.size()) {
    throw ValidationError("update_embedding: dimension mismatch");
  }
  Embedding mixed(current.size());
  for (size_t i = 0; i < current.size(); ++i) {
    mixed[i] = momentum * current[i] + (1.0 - momentum) * incoming[i];
  }
  return normalize_embedding(mixed);
}

Eigen::MatrixXd cost_matrix(const std::vector<Tracklet>& tracklets,
                            const std::vector<ScoredDetection>& detections,
                            const KalmanFilter& kf, const AssociationConfig& cfg) {
  cfg.validate();
  Eigen::MatrixXd cost(tracklets.size(), detections.size());
  for (size_t t = 0; t < tracklets.size(); ++t) {
    for (size_t d = 0; d < detections.size(); ++d) {
      const double gating =
          kf.gating_distance(tracklets[t].state, box_to_measurement(detections[d].box));
      const double appearance = cosine_distance(tracklets[t].embedding, detections[d].embedding);
      if (gating > cfg.motion_gate_threshold || appearance > cfg.embedding_distance_threshold) {
        cost(t, d) = kForbiddenCost;
        continue;
      }
      const double motion = std::min(1.0, gating / cfg.motion_gate_threshold);
      cost(t, d) = cfg.fusion_lambda * appearance + (1.0 - cfg.fusion_lambda) * motion;
    }
  }
  return cost;
}

AssociationResult associate(const std::vector<Tracklet>& tracklets,
                            const std::vector<ScoredDetection>& detections,
                            const KalmanFilter& kf, const AssociationConfig& cfg) {
  cfg.validate();
  AssociationResult result;
  std::vector<char> tracklet_done(tracklets.size(), 0);
  std::vector<char> detection_done(detections.size(), 0);

  // Stage 1: fused appearance+motion matching over confirmed and lost
  // tracklets (lost ones stay eligible until deletion, which carries tracks
  // through short occlusions).
  std::vector<int> stage1;
  for (size_t t = 0; t < tracklets.size(); ++t) {
    if (tracklets[t].status != TrackStatus::kTentative) stage1.push_back(static_cast<int>(t));
  }
  if (!stage1.empty() && !detections.empty()) {
    std::vector<Tracklet> subset;
    subset.reserve(stage1.size());
    for (int t : stage1) subset.push_back(tracklets[t]);
    const Eigen::MatrixXd cost = cost_matrix(subset, detections, kf, cfg);
    for (const auto& [r, c] : solve_assignment(cost).pairs) {
      result.matches.emplace_back(stage1[r], c);
      tracklet_done[stage1[r]] = 1;
      detection_done[c] = 1;
    }
  }

  // Stage 2: IoU fallback over everything unmatched, tentative included.
  std::vector<int> stage2_tracks;
  for (size_t t = 0; t < tracklets.size(); ++t) {
    if (!tracklet_done[t]) stage2_tracks.push_back(static_cast<int>(t));
  }
  std::vector<int> stage2_dets;
  for (size_t d = 0; d < detections.size(); ++d) {
    if (!detection_done[d]) stage2_dets.push_back(static_cast<int>(d));
  }
  if (!stage2_tracks.empty() && !stage2_dets.empty()) {
    Eigen::MatrixXd cost(stage2_tracks.size(), stage2_dets.size());
    for (size_t r = 0; r < stage2_tracks.size(); ++r) {
      const Box predicted = tracklets[stage2_tracks[r]].predicted_box();
      for (size_t c = 0; c < stage2_dets.size(); ++c) {
        const double overlap = iou(predicted, detections[stage2_dets[c]].box);
        cost(r, c) = overlap < cfg.iou_fallback_threshold ? kForbiddenCost : 1.0 - overlap;
      }
    }
    for (const auto& [r, c] : solve_assignment(cost).pairs) {
      result.matches.emplace_back(stage2_tracks[r], stage2_dets[c]);
      tracklet_done[stage2_tracks[r]] = 1;
      detection_done[stage2_dets[c]] = 1;
    }
  }

  for (size_t t = 0; t < tracklets.size(); ++t) {
    if (!tracklet_done[t]) result.unmatched_tracklets.push_back(static_cast<int>(t));
  }
  for (size_t d = 0; d < detections.size(); ++d) {
    if (!detection_done[d]) result.unmatched_detections.push_back(static_cast<int>(d));
  }
  std::sort(result.matches.begin(), result.matches.end());
  return result;
}

Tracker::Tracker(const AssociationConfig& cfg, const KalmanFilter::Params& kf_params)
    : cfg_(cfg), kf_(kf_params) {
  cfg_.validate();
}

std::vector<TrackOutput> Tracker::step(const std::vector<ScoredDetection>& detections) {
  ++frame_count_;

  std::vector<ScoredDetection> dets = detections;
  for (auto& d : dets) {
    if (!is_valid(d.box) || !(d.box.height() > 0.0) || !(d.box.width() > 0.0)) {
      throw ValidationError("tracker step: detections must have positive width and height");
    }
    if (!is_degenerate(d.embedding)) d.embedding = normalize_embedding(d.embedding);
  }

  for (auto& t : tracklets_) t.state = kf_.predict(t.state);

  const AssociationResult assoc = associate(tracklets_, dets, kf_, cfg_);

  for (const auto& [t, d] : assoc.matches) {
    Tracklet& track = tracklets_[t];
    track.state = kf_.update(track.state, box_to_measurement(dets[d].box));
    track.embedding = update_embedding(track.embedding, dets[d].embedding,
                                       cfg_.embedding_ema_momentum);
    track.hits += 1;
    track.time_since_update = 0;
    if (track.status == TrackStatus::kLost) track.status = TrackStatus::kConfirmed;
    if (track.status == TrackStatus::kTentative && track.hits >= cfg_.n_init) {
      track.status = TrackStatus::kConfirmed;
    }
  }

  std::vector<char> remove(tracklets_.size(), 0);
  for (int t : assoc.unmatched_tracklets) {
    Tracklet& track = tracklets_[t];
    if (track.status == TrackStatus::kTentative) {
      remove[t] = 1;  // a tentative track dies on its first miss
      continue;
    }
    track.hits = 0;
    track.time_since_update += 1;
    track.status = TrackStatus::kLost;
    if (track.time_since_update > cfg_.max_age) remove[t] = 1;
  }

  for (int d : assoc.unmatched_detections) {
    Tracklet track;
    track.track_id = next_id_++;
    track.state = kf_.initiate(box_to_measurement(dets[d].box));
    track.embedding = normalize_embedding(dets[d].embedding);
    track.hits = 1;
    track.time_since_update = 0;
    // The first batch of tracklets starts confirmed; later births must earn
    // confirmation through n_init consecutive hits.
    track.status = (frame_count_ == 1 || cfg_.n_init <= 1) ? TrackStatus::kConfirmed
                                                           : TrackStatus::kTentative;
    tracklets_.push_back(std::move(track));
    remove.push_back(0);
  }

  std::vector<Tracklet> kept;
  kept.reserve(tracklets_.size());
  for (size_t t = 0; t < tracklets_.size(); ++t) {
    if (!remove[t]) kept.push_back(std::move(tracklets_[t]));
  }
  tracklets_ = std::move(kept);

  std::vector<TrackOutput> outputs;
  for (const auto& t : tracklets_) {
    if (t.status == TrackStatus::kConfirmed && t.time_since_update == 0) {
      outputs.push_back(TrackOutput{t.track_id, measurement_to_box(t.state.mean.head<4>()), 1.0});
    }
  }
  return outputs;
}

}  // namespace dtrack
