// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <vector>

namespace dtrack {

/// Axis-aligned rectangle in pixel coordinates, origin top-left, corner form.
/// Invariants: x_max >= x_min, y_max >= y_min, all coordinates finite.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool operator==(const Box&) const = default;
};

/// True when the corner ordering holds and every coordinate is finite.
bool is_valid(const Box& b);

double area(const Box& b);

/// Intersection over union. Total on valid boxes; two zero-area boxes give 0.
double iou(const Box& a, const Box& b);

/// Clamp all coordinates to [0,width] x [0,height].
Box clip(const Box& b, double width, double height);

/// Appearance vector. Empty means "no embedding attached".
using Embedding = std::vector<double>;

/// One detector output: box, confidence, optional appearance embedding.
struct ScoredDetection {
  Box box;
  double score = 0.0;
  Embedding embedding;  // empty when the detector carries no appearance head
};

double l2_norm(const Embedding& e);

/// e / ||e||. The zero vector is returned unchanged: it is the degenerate
/// marker meaning "no appearance information" (see is_degenerate).
Embedding normalize_embedding(const Embedding& e);

bool is_degenerate(const Embedding& e);

/// 1 - cosine similarity, in [0, 2] for unit vectors. Either side degenerate
/// yields the no-information distance 1.
double cosine_distance(const Embedding& a, const Embedding& b);

}  // namespace dtrack
