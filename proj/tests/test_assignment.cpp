// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "assignment.hpp"
#include "rng.hpp"
#include "selftest.hpp"

using namespace dtrack;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const size_t r = rows.size();
  const size_t c = rows.begin()->size();
  Eigen::MatrixXd m(r, c);
  size_t i = 0;
  for (const auto& row : rows) {
    size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("hand-checked assignments") {
  SUBCASE("2x2 with a unique optimum") {
    const auto r = solve_assignment(mat({{1, 2}, {3, 1}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(r.cost == 2.0);
  }
  SUBCASE("diagonal dominance") {
    const auto r = solve_assignment(mat({{0, 9, 9}, {9, 0, 9}, {9, 9, 0}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(r.cost == 0.0);
  }
  SUBCASE("rectangular") {
    const auto r = solve_assignment(mat({{5, 1, 9}, {9, 5, 1}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(r.cost == 2.0);
  }
  SUBCASE("empty matrix") {
    CHECK(solve_assignment(Eigen::MatrixXd(0, 0)).pairs.empty());
    CHECK(solve_assignment(Eigen::MatrixXd(3, 0)).pairs.empty());
  }
}

TEST_CASE("forbidden entries cap the cardinality") {
  const double F = kForbiddenCost;
  SUBCASE("one allowed entry") {
    const auto r = solve_assignment(mat({{F, 1}, {F, F}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(r.cost == 1.0);
  }
  SUBCASE("all forbidden") {
    CHECK(solve_assignment(mat({{F, F}, {F, F}})).pairs.empty());
  }
  SUBCASE("max cardinality wins over cheap partial matchings") {
    // Leaving row 1 unmatched would cost only 1, but the largest matching
    // comes first.
    const auto r = solve_assignment(mat({{1, 10}, {F, 10}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(r.cost == 11.0);
  }
}

TEST_CASE("ties resolve lexicographically by row then column") {
  SUBCASE("fully tied square") {
    const auto r = solve_assignment(mat({{1, 1}, {1, 1}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
  }
  SUBCASE("two optima share the total") {
    // {(0,0),(1,1)} and {(0,1),(1,0)} both cost 2.
    const auto r = solve_assignment(mat({{0, 1}, {1, 2}}));
    CHECK(r.cost == 2.0);
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
  }
  SUBCASE("tied rectangular column choice") {
    // Row 0 could take either column at the same cost; prefer column 0.
    const auto r = solve_assignment(mat({{5, 5}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}});
  }
  SUBCASE("tall matrix prefers the earliest row") {
    const auto r = solve_assignment(mat({{5}, {5}}));
    CHECK(r.pairs == std::vector<std::pair<int, int>>{{0, 0}});
  }
}

TEST_CASE("matches the exhaustive oracle on random matrices") {
  Rng rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform_index(7));
    const int cols = 1 + static_cast<int>(rng.uniform_index(7));
    Eigen::MatrixXd cost(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (trial % 4 == 0 && rng.uniform() < 0.3) {
          cost(i, j) = kForbiddenCost;
        } else {
          cost(i, j) = static_cast<double>(static_cast<int>(rng.uniform_index(100)) - 25);
        }
      }
    }
    const AssignmentResult got = solve_assignment(cost);
    const BruteForceAssignment want = brute_force_assignment(cost);
    REQUIRE(static_cast<int>(got.pairs.size()) == want.cardinality);
    CHECK(got.cost == doctest::Approx(want.cost).epsilon(1e-9));
    // each row and column used at most once
    std::vector<char> row_used(rows, 0), col_used(cols, 0);
    for (const auto& [r, c] : got.pairs) {
      CHECK(!row_used[r]);
      CHECK(!col_used[c]);
      row_used[r] = 1;
      col_used[c] = 1;
      CHECK(std::isfinite(cost(r, c)));
    }
  }
}

TEST_CASE("deterministic across repeated solves") {
  Rng rng(55);
  Eigen::MatrixXd cost(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) cost(i, j) = static_cast<double>(rng.uniform_index(5));
  }
  const auto a = solve_assignment(cost);
  const auto b = solve_assignment(cost);
  CHECK(a.pairs == b.pairs);
  CHECK(a.cost == b.cost);
}
