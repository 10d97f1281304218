// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <functional>
#include <vector>

#include "geometry.hpp"

namespace dtrack {

/// Weights of the three-term training objective: total = alpha_c * L_c +
/// alpha_b * L_b + alpha_e * L_e.
struct LossWeights {
  double alpha_c = 1.0;   // focal classification loss
  double alpha_b = 50.0;  // Huber box regression loss
  double alpha_e = 10.0;  // L2 embedding distillation loss

  void validate() const;
};

struct FocalParams {
  double alpha = 0.25;
  double gamma = 1.5;

  void validate() const;
};

struct HuberParams {
  double delta = 0.1;

  void validate() const;
};

struct ScalarLoss {
  double loss = 0.0;
  double grad = 0.0;  // d loss / d prediction
};

/// Focal loss on one probability. p is clamped to [1e-7, 1-1e-7] for log
/// stability; with p_t = p when positive else 1-p and alpha_t likewise,
/// loss = -alpha_t * (1-p_t)^gamma * ln(p_t).
ScalarLoss focal_loss(double p, bool positive, const FocalParams& params = {});

/// Huber loss on a residual r = pred - target: 0.5 r^2 inside |r| <= delta,
/// delta * (|r| - delta/2) outside. Gradient continuous at the kink and
/// bounded by delta in magnitude.
ScalarLoss huber_loss(double pred, double target, const HuberParams& params = {});

struct EmbeddingLoss {
  double loss = 0.0;                         // mean over pairs of the per-pair sum
  std::vector<Embedding> grads;              // d loss / d pred, per pair
};

/// Squared-error distillation loss: per pair sum_i (target_i - pred_i)^2,
/// averaged over the pairs. Empty input gives loss 0.
EmbeddingLoss embedding_loss(const std::vector<Embedding>& preds,
                             const std::vector<Embedding>& targets);

double total_loss(double loss_c, double loss_b, double loss_e, const LossWeights& w = {});

/// Differentiable scalar function together with its analytic gradient,
/// evaluated at an n-dim point.
using LossFn = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

/// Central finite differences against the analytic gradient; returns the
/// maximum relative error over all samples and coordinates.
double grad_check(const LossFn& fn, const std::vector<std::vector<double>>& samples,
                  double epsilon = 1e-6);

}  // namespace dtrack
