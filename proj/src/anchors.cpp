// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "anchors.hpp"

#include <cmath>

#include "errors.hpp"

namespace dtrack {

void AnchorConfig::validate() const {
  if (levels.empty()) throw ValidationError("anchor config: level list must not be empty");
  for (size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) {
      throw ValidationError("anchor config: levels must be strictly increasing");
    }
  }
  if (scales_per_level < 1) throw ValidationError("anchor config: scales_per_level must be >= 1");
  if (aspect_ratios.empty()) throw ValidationError("anchor config: need at least one aspect ratio");
  for (double r : aspect_ratios) {
    if (!(r > 0.0)) throw ValidationError("anchor config: aspect ratios must be > 0");
  }
  if (!(base_size_multiplier > 0.0)) {
    throw ValidationError("anchor config: base_size_multiplier must be > 0");
  }
  if (!(positive_iou > negative_iou)) {
    throw ValidationError("anchor config: positive_iou must exceed negative_iou");
  }
}

size_t AnchorGrid::total_anchors() const {
  size_t n = 0;
  for (const auto& l : levels) n += l.anchors.size();
  return n;
}

std::vector<Box> AnchorGrid::all_anchors() const {
  std::vector<Box> out;
  out.reserve(total_anchors());
  for (const auto& l : levels) out.insert(out.end(), l.anchors.begin(), l.anchors.end());
  return out;
}

AnchorGrid generate_anchors(const AnchorConfig& config, double image_width, double image_height) {
  config.validate();
  if (!(image_width > 0.0) || !(image_height > 0.0)) {
    throw ValidationError("generate_anchors: image dimensions must be positive");
  }
  AnchorGrid grid;
  grid.levels.reserve(config.levels.size());
  for (int level : config.levels) {
    const double stride = std::pow(2.0, level);
    AnchorLevel out;
    out.level = level;
    out.feature_height = static_cast<int>(std::ceil(image_height / stride));
    out.feature_width = static_cast<int>(std::ceil(image_width / stride));
    const double base_edge = config.base_size_multiplier * stride;
    out.anchors.reserve(static_cast<size_t>(out.feature_height) * out.feature_width *
                        config.scales_per_level * config.aspect_ratios.size());
    for (int i = 0; i < out.feature_height; ++i) {
      for (int j = 0; j < out.feature_width; ++j) {
        const double cx = (j + 0.5) * stride;
        const double cy = (i + 0.5) * stride;
        for (int s = 0; s < config.scales_per_level; ++s) {
          const double edge =
              base_edge * std::pow(2.0, static_cast<double>(s) / config.scales_per_level);
          for (double ratio : config.aspect_ratios) {
            // Area-preserving split of the square anchor: ratio = w/h.
            const double w = edge * std::sqrt(ratio);
            const double h = edge / std::sqrt(ratio);
            out.anchors.push_back(
                Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h});
          }
        }
      }
    }
    grid.levels.push_back(std::move(out));
  }
  return grid;
}

size_t AnchorAssignment::count(AnchorLabel l) const {
  size_t n = 0;
  for (AnchorLabel x : labels) {
    if (x == l) ++n;
  }
  return n;
}

AnchorAssignment assign_anchors(const AnchorGrid& grid,
                                const std::vector<EmbeddedGroundTruth>& gts,
                                const AnchorConfig& config) {
  config.validate();
  for (const auto& gt : gts) {
    if (!is_valid(gt.box)) throw ValidationError("assign_anchors: invalid ground-truth box");
    if (gt.teacher.size() != gts.front().teacher.size()) {
      throw ValidationError("assign_anchors: teacher embedding dimension mismatch");
    }
  }

  AnchorAssignment out;
  out.gts = gts;
  const std::vector<Box> anchors = grid.all_anchors();
  out.labels.assign(anchors.size(), AnchorLabel::kNegative);
  out.gt_index.assign(anchors.size(), -1);

  for (size_t a = 0; a < anchors.size(); ++a) {
    double best = 0.0;
    int best_gt = -1;
    for (size_t g = 0; g < gts.size(); ++g) {
      const double v = iou(anchors[a], gts[g].box);
      if (v > best) {  // strict: ties keep the lowest gt index
        best = v;
        best_gt = static_cast<int>(g);
      }
    }
    if (best >= config.positive_iou && best_gt >= 0) {
      out.labels[a] = AnchorLabel::kPositive;
      out.gt_index[a] = best_gt;
    } else if (best < config.negative_iou) {
      out.labels[a] = AnchorLabel::kNegative;
    } else {
      out.labels[a] = AnchorLabel::kIgnore;
    }
  }
  return out;
}

std::array<double, 4> encode_box_residual(const Box& target, const Box& anchor) {
  const double aw = anchor.width();
  const double ah = anchor.height();
  if (!(aw > 0.0) || !(ah > 0.0)) throw ValidationError("encode_box_residual: degenerate anchor");
  if (!(target.width() > 0.0) || !(target.height() > 0.0)) {
    throw ValidationError("encode_box_residual: degenerate target box");
  }
  return {(target.center_x() - anchor.center_x()) / aw,
          (target.center_y() - anchor.center_y()) / ah, std::log(target.width() / aw),
          std::log(target.height() / ah)};
}

Box decode_box_residual(const std::array<double, 4>& residual, const Box& anchor) {
  const double aw = anchor.width();
  const double ah = anchor.height();
  const double cx = anchor.center_x() + residual[0] * aw;
  const double cy = anchor.center_y() + residual[1] * ah;
  const double w = aw * std::exp(residual[2]);
  const double h = ah * std::exp(residual[3]);
  return Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

}  // namespace dtrack
