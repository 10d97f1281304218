// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "geometry.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace dtrack {

bool is_valid(const Box& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) && std::isfinite(b.x_max) &&
         std::isfinite(b.y_max) && b.x_max >= b.x_min && b.y_max >= b.y_min;
}

double area(const Box& b) { return (b.x_max - b.x_min) * (b.y_max - b.y_min); }

double iou(const Box& a, const Box& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = area(a) + area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

Box clip(const Box& b, double width, double height) {
  auto clamp = [](double v, double hi) { return std::clamp(v, 0.0, hi); };
  return Box{clamp(b.x_min, width), clamp(b.y_min, height), clamp(b.x_max, width),
             clamp(b.y_max, height)};
}

double l2_norm(const Embedding& e) {
  double sum = 0.0;
  for (double v : e) sum += v * v;
  return std::sqrt(sum);
}

Embedding normalize_embedding(const Embedding& e) {
  const double norm = l2_norm(e);
  if (norm <= 0.0) return e;  // degenerate marker stays as-is
  Embedding out(e.size());
  for (size_t i = 0; i < e.size(); ++i) out[i] = e[i] / norm;
  return out;
}

bool is_degenerate(const Embedding& e) { return e.empty() || l2_norm(e) < 1e-12; }

double cosine_distance(const Embedding& a, const Embedding& b) {
  if (is_degenerate(a) || is_degenerate(b)) return 1.0;
  if (a.size() != b.size()) {
    throw ValidationError("cosine_distance: dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return 1.0 - dot / (l2_norm(a) * l2_norm(b));
}

}  // namespace dtrack
