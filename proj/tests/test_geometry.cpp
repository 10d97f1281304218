// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geometry.hpp"
#include "rng.hpp"

using namespace dtrack;

namespace {

Box random_box(Rng& rng) {
  const double x = rng.uniform(-50.0, 50.0);
  const double y = rng.uniform(-50.0, 50.0);
  return Box{x, y, x + rng.uniform(0.5, 40.0), y + rng.uniform(0.5, 40.0)};
}

}  // namespace

TEST_CASE("iou examples") {
  const Box a{0, 0, 2, 2};
  CHECK(iou(a, a) == doctest::Approx(1.0));
  CHECK(iou(Box{0, 0, 1, 1}, Box{5, 5, 6, 6}) == 0.0);
  // intersection 2, union 6
  CHECK(iou(Box{0, 0, 2, 2}, Box{1, 0, 3, 2}) == doctest::Approx(1.0 / 3.0));
  // two degenerate boxes
  CHECK(iou(Box{1, 1, 1, 1}, Box{1, 1, 1, 1}) == 0.0);
}

TEST_CASE("area examples") {
  CHECK(area(Box{0, 0, 0, 0}) == 0.0);
  CHECK(area(Box{0, 0, 2, 3}) == 6.0);
  CHECK(area(Box{1, 1, 2, 2}) == 1.0);
}

TEST_CASE("clip examples") {
  CHECK(clip(Box{-1, -1, 5, 5}, 4, 4) == Box{0, 0, 4, 4});
  CHECK(clip(Box{1, 1, 2, 2}, 4, 4) == Box{1, 1, 2, 2});
  CHECK(clip(Box{3, 3, 9, 9}, 4, 4) == Box{3, 3, 4, 4});
}

TEST_CASE("iou properties on random boxes") {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    const Box a = random_box(rng);
    const Box b = random_box(rng);
    const double v = iou(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(iou(b, a) == doctest::Approx(v));
    CHECK(iou(a, a) == doctest::Approx(1.0));
    const double tx = rng.uniform(-20.0, 20.0);
    const double ty = rng.uniform(-20.0, 20.0);
    const Box at{a.x_min + tx, a.y_min + ty, a.x_max + tx, a.y_max + ty};
    const Box bt{b.x_min + tx, b.y_min + ty, b.x_max + tx, b.y_max + ty};
    CHECK(iou(at, bt) == doctest::Approx(v).epsilon(1e-9));
    const Box clipped = clip(a, 30.0, 30.0);
    CHECK(is_valid(clipped));
    CHECK(clipped.x_min >= 0.0);
    CHECK(clipped.y_max <= 30.0);
  }
}

TEST_CASE("embedding normalize and cosine distance") {
  const Embedding e{3.0, 4.0};
  const Embedding n = normalize_embedding(e);
  CHECK(n[0] == doctest::Approx(0.6));
  CHECK(n[1] == doctest::Approx(0.8));
  CHECK(normalize_embedding(n) == n);  // idempotent

  const Embedding zero{0.0, 0.0};
  CHECK(is_degenerate(zero));
  CHECK(normalize_embedding(zero) == zero);

  CHECK(cosine_distance(Embedding{1, 0}, Embedding{1, 0}) == doctest::Approx(0.0));
  CHECK(cosine_distance(Embedding{1, 0}, Embedding{0, 1}) == doctest::Approx(1.0));
  CHECK(cosine_distance(Embedding{1, 0}, Embedding{-1, 0}) == doctest::Approx(2.0));
  CHECK(cosine_distance(zero, Embedding{1, 0}) == 1.0);
}
