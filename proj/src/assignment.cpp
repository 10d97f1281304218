// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "assignment.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace dtrack {

namespace {

// Kuhn augmenting-path search on the tight subgraph; `blocked` cols are
// unavailable (forced elsewhere).
bool try_augment(int row, const std::vector<std::vector<int>>& adj,
                 const std::vector<char>& blocked_col, std::vector<int>& match_col,
                 std::vector<char>& visited) {
  for (int col : adj[row]) {
    if (blocked_col[col] || visited[col]) continue;
    visited[col] = 1;
    if (match_col[col] < 0 ||
        try_augment(match_col[col], adj, blocked_col, match_col, visited)) {
      match_col[col] = row;
      return true;
    }
  }
  return false;
}

// Can the tight subgraph be perfectly matched when the given row/col pairs
// are forced? Rows in `skip_row` are taken out together with their columns.
bool perfect_matching_exists(int n, const std::vector<std::vector<int>>& adj,
                             const std::vector<char>& skip_row,
                             const std::vector<char>& blocked_col) {
  std::vector<int> match_col(n, -1);
  std::vector<char> visited(n, 0);
  for (int r = 0; r < n; ++r) {
    if (skip_row[r]) continue;
    std::fill(visited.begin(), visited.end(), 0);
    if (!try_augment(r, adj, blocked_col, match_col, visited)) return false;
  }
  return true;
}

}  // namespace

AssignmentResult solve_assignment(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  AssignmentResult result;
  if (rows == 0 || cols == 0) return result;

  double max_abs = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double c = cost(i, j);
      if (std::isnan(c) || c == -kForbiddenCost) {
        throw ValidationError("solve_assignment: costs must be finite or forbidden");
      }
      if (std::isfinite(c)) max_abs = std::max(max_abs, std::abs(c));
    }
  }

  // Square padding; forbidden and padding cells carry a cost big enough that
  // minimizing total cost first maximizes the count of real matches.
  const int n = std::max(rows, cols);
  const double big = (max_abs + 1.0) * (n + 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, big);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (std::isfinite(cost(i, j))) c(i, j) = cost(i, j);
    }
  }

  // Hungarian method with potentials, O(n^3).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;

  // Complementary slackness: every optimal matching lives on tight edges, so
  // tie-breaking is a lexicographic walk over the tight subgraph.
  const double tol = 1e-7 * std::max(1.0, big);
  std::vector<std::vector<int>> tight(n);
  std::vector<int> real_tight_rows(cols, 0);
  bool ambiguous = false;
  for (int i = 0; i < n; ++i) {
    int real_cols = 0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(c(i, j) - u[i + 1] - v[j + 1]) <= tol) {
        tight[i].push_back(j);
        if (i < rows && j < cols && std::isfinite(cost(i, j))) {
          ++real_cols;
          ++real_tight_rows[j];
        }
      }
    }
    if (i < rows && real_cols > 1) ambiguous = true;
  }
  for (int j = 0; j < cols && !ambiguous; ++j) {
    if (real_tight_rows[j] > 1) ambiguous = true;
  }

  if (ambiguous) {
    std::vector<char> skip_row(n, 0);
    std::vector<char> blocked_col(n, 0);
    std::vector<int> chosen(n, -1);
    for (int i = 0; i < rows; ++i) {
      for (int j : tight[i]) {
        if (j >= cols || blocked_col[j] || !std::isfinite(cost(i, j))) continue;
        skip_row[i] = 1;
        blocked_col[j] = 1;
        if (perfect_matching_exists(n, tight, skip_row, blocked_col)) {
          chosen[i] = j;
          break;
        }
        skip_row[i] = 0;
        blocked_col[j] = 0;
      }
    }
    for (int i = 0; i < rows; ++i) row_to_col[i] = chosen[i];
  }

  for (int i = 0; i < rows; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < cols && std::isfinite(cost(i, j))) {
      result.pairs.emplace_back(i, j);
      result.cost += cost(i, j);
    }
  }
  return result;
}

}  // namespace dtrack
