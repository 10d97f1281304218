// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "geometry.hpp"

namespace dtrack {

/// Multi-level anchor layout plus the IoU label-assignment thresholds.
struct AnchorConfig {
  std::vector<int> levels{3, 4, 5, 6, 7};
  int scales_per_level = 3;                          // octave scales 2^(k/S)
  std::vector<double> aspect_ratios{0.25, 0.5, 1.0};  // w/h
  double base_size_multiplier = 4.0;                 // anchor edge = mult * 2^level
  double positive_iou = 0.5;
  double negative_iou = 0.4;

  void validate() const;
};

struct AnchorLevel {
  int level = 0;
  int feature_height = 0;
  int feature_width = 0;
  std::vector<Box> anchors;  // row-major cells, then scale, then ratio
};

struct AnchorGrid {
  std::vector<AnchorLevel> levels;

  size_t total_anchors() const;
  /// Flat view across levels, in level order.
  std::vector<Box> all_anchors() const;
};

/// Anchors are centered on feature-cell centers mapped back to image
/// coordinates and are not clipped to the image bounds.
AnchorGrid generate_anchors(const AnchorConfig& config, double image_width, double image_height);

enum class AnchorLabel : std::uint8_t { kNegative, kIgnore, kPositive };

/// Ground-truth box with the teacher embedding distilled for it.
struct EmbeddedGroundTruth {
  Box box;
  Embedding teacher;
};

struct AnchorAssignment {
  std::vector<AnchorLabel> labels;    // one per anchor, flat across levels
  std::vector<int> gt_index;          // valid where label == kPositive, else -1
  std::vector<EmbeddedGroundTruth> gts;

  size_t count(AnchorLabel l) const;
  const Box& target_box(size_t anchor_idx) const { return gts[gt_index[anchor_idx]].box; }
  const Embedding& target_embedding(size_t anchor_idx) const {
    return gts[gt_index[anchor_idx]].teacher;
  }
};

/// Per anchor, the max-IoU ground truth decides the label: >= positive_iou is
/// positive (ties broken by lowest gt index), < negative_iou negative, the
/// band in between is ignored. Positives inherit their ground truth's teacher
/// embedding; other anchors carry none.
AnchorAssignment assign_anchors(const AnchorGrid& grid,
                                const std::vector<EmbeddedGroundTruth>& gts,
                                const AnchorConfig& config);

/// Anchor-relative box encoding: center offsets scaled by the anchor size and
/// log size ratios. This is the regression target parameterization the box
/// head trains against.
std::array<double, 4> encode_box_residual(const Box& target, const Box& anchor);
Box decode_box_residual(const std::array<double, 4>& residual, const Box& anchor);

}  // namespace dtrack
