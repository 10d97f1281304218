// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

namespace dtrack {

/// Marks a (row, col) pair that must not be matched.
constexpr double kForbiddenCost = std::numeric_limits<double>::infinity();

struct AssignmentResult {
  std::vector<std::pair<int, int>> pairs;  // sorted by row
  double cost = 0.0;                       // sum over the returned pairs
};

/// Minimum-cost bipartite assignment (Hungarian method with potentials).
///
/// Returns a matching of size min(rows, cols) when one exists over the
/// allowed entries; otherwise the maximum-cardinality matching of minimum
/// cost. Ties are broken deterministically: among all optimal matchings the
/// lexicographically smallest (by row, then column) is returned. Costs must
/// be finite except for kForbiddenCost markers. An empty matrix yields an
/// empty assignment.
AssignmentResult solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace dtrack
