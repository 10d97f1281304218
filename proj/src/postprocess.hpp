// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <vector>

#include "geometry.hpp"

namespace dtrack {

struct PostprocessConfig {
  double score_threshold = 0.05;
  double nms_iou = 0.5;
  int max_detections = 100;

  void validate() const;
};

/// Keeps detections with score >= threshold ("smaller than" is removed, so
/// the boundary survives); input order preserved.
std::vector<ScoredDetection> filter_scores(const std::vector<ScoredDetection>& dets,
                                           double threshold);

/// Greedy NMS: scan in descending score (ties by input order); keep a
/// detection iff its IoU with every already-kept one is <= iou_threshold.
/// Output in descending-score order.
std::vector<ScoredDetection> nms(const std::vector<ScoredDetection>& dets, double iou_threshold);

/// k highest-scoring detections (all if fewer), descending, stable ties.
std::vector<ScoredDetection> top_k(const std::vector<ScoredDetection>& dets, int k);

/// filter -> NMS -> top_k.
std::vector<ScoredDetection> postprocess(const std::vector<ScoredDetection>& dets,
                                         const PostprocessConfig& config);

}  // namespace dtrack
