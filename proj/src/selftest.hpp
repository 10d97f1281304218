// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "metrics.hpp"

namespace dtrack {

/// Exhaustive-enumeration assignment oracle: maximum cardinality first, then
/// minimum cost, over allowed (finite) entries. Exponential; for small
/// matrices only. Independent of solve_assignment by construction.
struct BruteForceAssignment {
  int cardinality = 0;
  double cost = 0.0;
};
BruteForceAssignment brute_force_assignment(const Eigen::MatrixXd& cost);

/// CLEAR metrics recomputed with the exhaustive per-frame matcher in place of
/// the Hungarian solver; the correspondence protocol is the same.
ClearResult oracle_clear_metrics(const GtSequence& gts, const HypSequence& hyps,
                                 double iou_thresh = 0.5);

/// IDF1 recomputed by enumerating every injective identity mapping.
IdfResult oracle_idf1(const GtSequence& gts, const HypSequence& hyps, double iou_thresh = 0.5);

/// Random tiny tracking scenario for oracle cross-checks (<= 3 identities,
/// <= 5 frames); deterministic per seed.
void random_small_scenario(std::uint64_t seed, GtSequence* gts, HypSequence* hyps);

/// Built-in checks behind the `selftest` CLI command: gradient finite
/// differences, assignment solver vs. the exhaustive oracle, and metric
/// oracles. Prints one line per check; returns false on any failure.
bool run_selftest(std::ostream& log);

}  // namespace dtrack
