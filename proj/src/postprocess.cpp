// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "postprocess.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"

namespace dtrack {

void PostprocessConfig::validate() const {
  if (score_threshold < 0.0 || score_threshold > 1.0) {
    throw ValidationError("postprocess: score_threshold must be in [0,1]");
  }
  if (!(nms_iou > 0.0) || nms_iou > 1.0) {
    throw ValidationError("postprocess: nms_iou must be in (0,1]");
  }
  if (max_detections < 1) throw ValidationError("postprocess: max_detections must be >= 1");
}

namespace {

std::vector<size_t> by_score_desc(const std::vector<ScoredDetection>& dets) {
  std::vector<size_t> order(dets.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

}  // namespace

std::vector<ScoredDetection> filter_scores(const std::vector<ScoredDetection>& dets,
                                           double threshold) {
  std::vector<ScoredDetection> out;
  out.reserve(dets.size());
  for (const auto& d : dets) {
    if (d.score >= threshold) out.push_back(d);
  }
  return out;
}

std::vector<ScoredDetection> nms(const std::vector<ScoredDetection>& dets, double iou_threshold) {
  std::vector<ScoredDetection> kept;
  for (size_t idx : by_score_desc(dets)) {
    const ScoredDetection& cand = dets[idx];
    bool suppressed = false;
    for (const auto& k : kept) {
      if (iou(cand.box, k.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::vector<ScoredDetection> top_k(const std::vector<ScoredDetection>& dets, int k) {
  if (k < 1) throw ValidationError("top_k: k must be >= 1");
  const auto order = by_score_desc(dets);
  std::vector<ScoredDetection> out;
  out.reserve(std::min<size_t>(order.size(), static_cast<size_t>(k)));
  for (size_t i = 0; i < order.size() && i < static_cast<size_t>(k); ++i) {
    out.push_back(dets[order[i]]);
  }
  return out;
}

std::vector<ScoredDetection> postprocess(const std::vector<ScoredDetection>& dets,
                                         const PostprocessConfig& config) {
  config.validate();
  return top_k(nms(filter_scores(dets, config.score_threshold), config.nms_iou),
               config.max_detections);
}

}  // namespace dtrack
