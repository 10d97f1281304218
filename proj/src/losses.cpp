// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "losses.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace dtrack {

namespace {
constexpr double kProbClamp = 1e-7;
}

void LossWeights::validate() const {
  if (alpha_c < 0.0 || alpha_b < 0.0 || alpha_e < 0.0) {
    throw ValidationError("loss weights must be nonnegative");
  }
}

void FocalParams::validate() const {
  if (alpha < 0.0 || alpha > 1.0) throw ValidationError("focal alpha must be in [0,1]");
  if (gamma < 0.0) throw ValidationError("focal gamma must be >= 0");
}

void HuberParams::validate() const {
  if (!(delta > 0.0)) throw ValidationError("huber delta must be > 0");
}

ScalarLoss focal_loss(double p, bool positive, const FocalParams& params) {
  params.validate();
  const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  const double p_t = positive ? pc : 1.0 - pc;
  const double alpha_t = positive ? params.alpha : 1.0 - params.alpha;
  const double one_minus = 1.0 - p_t;
  const double pow_term = std::pow(one_minus, params.gamma);
  const double log_pt = std::log(p_t);

  ScalarLoss out;
  out.loss = -alpha_t * pow_term * log_pt;

  // d/dp_t [-(1-p_t)^g ln p_t] = g (1-p_t)^(g-1) ln p_t - (1-p_t)^g / p_t
  double d_pt = -pow_term / p_t;
  if (params.gamma > 0.0) {
    d_pt += params.gamma * std::pow(one_minus, params.gamma - 1.0) * log_pt;
  }
  d_pt *= alpha_t;
  out.grad = positive ? d_pt : -d_pt;
  return out;
}

ScalarLoss huber_loss(double pred, double target, const HuberParams& params) {
  params.validate();
  if (!std::isfinite(pred) || !std::isfinite(target)) {
    throw ValidationError("huber_loss: inputs must be finite");
  }
  const double r = pred - target;
  ScalarLoss out;
  if (std::abs(r) <= params.delta) {
    out.loss = 0.5 * r * r;
    out.grad = r;
  } else {
    out.loss = params.delta * (std::abs(r) - 0.5 * params.delta);
    out.grad = r > 0.0 ? params.delta : -params.delta;
  }
  return out;
}

EmbeddingLoss embedding_loss(const std::vector<Embedding>& preds,
                             const std::vector<Embedding>& targets) {
  if (preds.size() != targets.size()) {
    throw ValidationError("embedding_loss: pred/target count mismatch");
  }
  EmbeddingLoss out;
  if (preds.empty()) return out;

  const double inv_n = 1.0 / static_cast<double>(preds.size());
  out.grads.resize(preds.size());
  for (size_t k = 0; k < preds.size(); ++k) {
    if (preds[k].size() != targets[k].size()) {
      throw ValidationError("embedding_loss: dimension mismatch at pair " + std::to_string(k));
    }
    Embedding& g = out.grads[k];
    g.resize(preds[k].size());
    for (size_t i = 0; i < preds[k].size(); ++i) {
      const double diff = targets[k][i] - preds[k][i];
      out.loss += diff * diff * inv_n;
      g[i] = -2.0 * diff * inv_n;
    }
  }
  return out;
}

double total_loss(double loss_c, double loss_b, double loss_e, const LossWeights& w) {
  w.validate();
  if (!std::isfinite(loss_c) || !std::isfinite(loss_b) || !std::isfinite(loss_e)) {
    throw ValidationError("total_loss: components must be finite");
  }
  return w.alpha_c * loss_c + w.alpha_b * loss_b + w.alpha_e * loss_e;
}

double grad_check(const LossFn& fn, const std::vector<std::vector<double>>& samples,
                  double epsilon) {
  double worst = 0.0;
  std::vector<double> analytic;
  for (const auto& x0 : samples) {
    analytic.assign(x0.size(), 0.0);
    fn(x0, &analytic);
    std::vector<double> x = x0;
    for (size_t i = 0; i < x0.size(); ++i) {
      const double h = epsilon * std::max(1.0, std::abs(x0[i]));
      x[i] = x0[i] + h;
      const double up = fn(x, nullptr);
      x[i] = x0[i] - h;
      const double down = fn(x, nullptr);
      x[i] = x0[i];
      const double fd = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(analytic[i]), std::abs(fd), 1e-8});
      worst = std::max(worst, std::abs(analytic[i] - fd) / denom);
    }
  }
  return worst;
}

}  // namespace dtrack
