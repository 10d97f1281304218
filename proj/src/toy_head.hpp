// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "losses.hpp"

namespace dtrack {

/// Trainer settings for the per-anchor student head.
struct ToyHeadConfig {
  int feature_dim = 64;
  int hidden_dim = 256;
  int student_dim = 128;
  double learning_rate = 0.05;
  int iterations = 600;
  int batch_size = 64;
  std::uint64_t rng_seed = 1;
  LossWeights weights;
  FocalParams focal;
  HuberParams huber;

  void validate() const;
};

/// Synthetic per-anchor training pool: identity samples are tight clusters
/// around seeded prototypes, backgrounds are low-energy noise, and the
/// teacher is a fixed seeded projection of the features, normalized and then
/// truncated to the student dimension.
struct ToyDataSpec {
  int identity_count = 200;
  int samples_per_identity = 10;
  int holdout_per_identity = 2;
  int background_count = 2000;
  int feature_dim = 64;
  int teacher_dim = 512;
  int student_dim = 128;
  double feature_noise = 0.3;
  double background_scale = 0.4;
  std::uint64_t seed = 1;
};

struct ToyDataset {
  Eigen::MatrixXd features;         // feature_dim x N
  std::vector<int> labels;          // 1 = anchor assigned to an identity
  std::vector<long long> identities;  // -1 for background
  Eigen::MatrixXd box_targets;      // 4 x N, valid on positive columns
  Eigen::MatrixXd teacher_targets;  // student_dim x N, valid on positive columns
  Eigen::MatrixXd holdout_features;
  std::vector<long long> holdout_identities;
  int identity_count = 0;
};

ToyDataset make_toy_dataset(const ToyDataSpec& spec);

/// Two affine layers with a ReLU in between; the batch-norm slot is a fixed
/// feature standardization computed once from the training pool. Three output
/// branches share the hidden layer: class logit, box residual, embedding.
struct ToyHead {
  Eigen::VectorXd feat_mean;
  Eigen::VectorXd feat_scale;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::RowVectorXd wc;
  double bc = 0.0;
  Eigen::MatrixXd wb;
  Eigen::Vector4d bb;
  Eigen::MatrixXd we;
  Eigen::VectorXd be;

  Eigen::MatrixXd hidden(const Eigen::MatrixXd& features) const;
  Eigen::VectorXd class_probs(const Eigen::MatrixXd& features) const;
  Eigen::MatrixXd embeddings(const Eigen::MatrixXd& features) const;
  Eigen::MatrixXd box_residuals(const Eigen::MatrixXd& features) const;
};

struct LossCurvePoint {
  int iteration = 0;
  double loss_c = 0.0;
  double loss_b = 0.0;
  double loss_e = 0.0;
  double total = 0.0;
};

struct ToyTrainResult {
  ToyHead head;
  std::vector<LossCurvePoint> curve;  // per-iteration batch losses
  LossCurvePoint initial;             // full-pool losses before training
  LossCurvePoint final;               // full-pool losses after training
};

/// Minibatch SGD on the weighted three-term objective. Deterministic under a
/// fixed seed; a non-finite loss aborts with the iteration index.
ToyTrainResult train_toy_head(const ToyDataset& data, const ToyHeadConfig& config);

/// Nearest-neighbor identity retrieval: gallery is the per-identity mean of
/// normalized training embeddings, queries are the held-out samples. Returns
/// the top-1 accuracy in [0, 1].
double retrieval_top1(const ToyHead& head, const ToyDataset& data);

/// Line-delimited loss-curve records: iteration,L_c,L_b,L_e,total.
std::string write_loss_curve(const std::vector<LossCurvePoint>& curve);

}  // namespace dtrack
