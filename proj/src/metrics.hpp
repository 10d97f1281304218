// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace dtrack {

struct GtEntry {
  long long id = 0;
  Box box;
};

struct GtFrame {
  int frame = 1;
  std::vector<GtEntry> entries;  // ids unique within the frame
};

struct HypEntry {
  long long id = -1;
  Box box;
  double score = 1.0;
};

struct HypFrame {
  int frame = 1;
  std::vector<HypEntry> entries;
};

using GtSequence = std::vector<GtFrame>;
using HypSequence = std::vector<HypFrame>;

/// Detection AP at the given IoU threshold. Detections are pooled across
/// frames and ranked by score; each greedily claims the highest-IoU unmatched
/// ground truth of its frame. Area under the all-point interpolated PR curve.
/// Undefined (nullopt) when there is no ground truth at all.
std::optional<double> average_precision(const HypSequence& detections, const GtSequence& gts,
                                        double iou_thresh = 0.5);

struct ClearResult {
  std::optional<double> mota;  // undefined when there is no ground truth
  double motp = 0.0;           // mean (1 - IoU) over matches
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  int mt = 0;
  int ml = 0;
  double mt_ratio = 0.0;
  double ml_ratio = 0.0;
  int gt_identities = 0;
  long long total_gt = 0;
  long long total_matches = 0;
};

/// CLEAR metrics with the MOTChallenge correspondence rule: previous-frame
/// pairings are carried over while still valid at the IoU threshold, the
/// remainder is matched per frame by a minimum-cost assignment on 1 - IoU.
ClearResult clear_metrics(const GtSequence& gts, const HypSequence& hyps,
                          double iou_thresh = 0.5);

struct IdfResult {
  double idf1 = 0.0;
  double idp = 0.0;
  double idr = 0.0;
  long long idtp = 0;
  long long total_gt = 0;
  long long total_hyp = 0;
};

/// Identity scores under the globally optimal one-to-one identity mapping,
/// weighted by per-frame IoU co-occurrence counts. Both sides empty gives
/// IDF1 = 1 by convention.
IdfResult idf1(const GtSequence& gts, const HypSequence& hyps, double iou_thresh = 0.5);

/// Per-sequence metric bundle.
struct SequenceEval {
  std::string name;
  ClearResult clear;
  IdfResult idf;
  std::optional<double> ap;  // present when detections were supplied
};

SequenceEval evaluate_sequence(const std::string& name, const GtSequence& gts,
                               const HypSequence& hyps,
                               const HypSequence* detections = nullptr,
                               double iou_thresh = 0.5);

/// Structured text report: one record per sequence plus an aggregate.
std::string format_report(const std::vector<SequenceEval>& sequences);

}  // namespace dtrack
