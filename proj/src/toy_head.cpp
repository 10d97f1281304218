// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "toy_head.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "distill.hpp"
#include "errors.hpp"
#include "numfmt.hpp"
#include "rng.hpp"

namespace dtrack {

void ToyHeadConfig::validate() const {
  if (feature_dim < 1 || hidden_dim < 1 || student_dim < 1 || iterations < 1 || batch_size < 1) {
    throw ValidationError("toy head config: dimensions, iterations and batch size must be >= 1");
  }
  if (!(learning_rate > 0.0)) throw ValidationError("toy head config: learning rate must be > 0");
  weights.validate();
  focal.validate();
  huber.validate();
}

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng, double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = scale * rng.gaussian();
  }
  return m;
}

double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

}  // namespace

ToyDataset make_toy_dataset(const ToyDataSpec& spec) {
  if (spec.identity_count < 2) throw ValidationError("toy dataset: need at least 2 identities");
  if (spec.samples_per_identity < 1 || spec.feature_dim < 1 || spec.teacher_dim < 1) {
    throw ValidationError("toy dataset: counts and dimensions must be >= 1");
  }
  if (spec.student_dim < 1 || spec.student_dim > spec.teacher_dim) {
    throw ValidationError("toy dataset: student_dim must be in [1, teacher_dim]");
  }

  Rng proto_rng(mix_seed(spec.seed, "toy-prototypes"));
  Eigen::MatrixXd prototypes =
      random_matrix(spec.feature_dim, spec.identity_count, proto_rng, 1.0);

  Rng proj_rng(mix_seed(spec.seed, "toy-teacher-projection"));
  Eigen::MatrixXd projection = random_matrix(spec.teacher_dim, spec.feature_dim, proj_rng, 1.0);

  Rng box_rng(mix_seed(spec.seed, "toy-box-map"));
  Eigen::MatrixXd box_map = random_matrix(4, spec.feature_dim, box_rng,
                                          1.0 / std::sqrt(double(spec.feature_dim)));

  auto teacher_of = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd t = projection * x;
    Embedding full(t.data(), t.data() + t.size());
    return truncate_embedding(make_teacher_embedding(std::move(full)),
                              static_cast<size_t>(spec.student_dim));
  };
  auto residual_of = [&](const Eigen::VectorXd& x) {
    Eigen::Vector4d r = box_map * x;
    return Eigen::Vector4d(r.array().tanh() * 0.4);
  };

  const int train_pos = spec.identity_count * spec.samples_per_identity;
  const int total = train_pos + spec.background_count;
  ToyDataset data;
  data.identity_count = spec.identity_count;
  data.features.resize(spec.feature_dim, total);
  data.labels.assign(total, 0);
  data.identities.assign(total, -1);
  data.box_targets = Eigen::MatrixXd::Zero(4, total);
  data.teacher_targets = Eigen::MatrixXd::Zero(spec.student_dim, total);
  data.holdout_features.resize(spec.feature_dim, spec.identity_count * spec.holdout_per_identity);

  Rng sample_rng(mix_seed(spec.seed, "toy-samples"));
  int col = 0;
  int hold = 0;
  for (int k = 0; k < spec.identity_count; ++k) {
    for (int s = 0; s < spec.samples_per_identity + spec.holdout_per_identity; ++s) {
      Eigen::VectorXd x = prototypes.col(k);
      for (int d = 0; d < spec.feature_dim; ++d) x[d] += spec.feature_noise * sample_rng.gaussian();
      if (s < spec.samples_per_identity) {
        data.features.col(col) = x;
        data.labels[col] = 1;
        data.identities[col] = k;
        data.box_targets.col(col) = residual_of(x);
        const Embedding t = teacher_of(x);
        for (int d = 0; d < spec.student_dim; ++d) data.teacher_targets(d, col) = t[d];
        ++col;
      } else {
        data.holdout_features.col(hold) = x;
        data.holdout_identities.push_back(k);
        ++hold;
      }
    }
  }
  Rng bg_rng(mix_seed(spec.seed, "toy-background"));
  for (int b = 0; b < spec.background_count; ++b) {
    for (int d = 0; d < spec.feature_dim; ++d) {
      data.features(d, col) = spec.background_scale * bg_rng.gaussian();
    }
    ++col;
  }
  return data;
}

Eigen::MatrixXd ToyHead::hidden(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd x = (features.colwise() - feat_mean).array().colwise() * feat_scale.array();
  Eigen::MatrixXd z = (w1 * x).colwise() + b1;
  return z.cwiseMax(0.0);
}

Eigen::VectorXd ToyHead::class_probs(const Eigen::MatrixXd& features) const {
  const Eigen::MatrixXd h = hidden(features);
  Eigen::VectorXd p(h.cols());
  for (int i = 0; i < h.cols(); ++i) p[i] = sigmoid(wc.dot(h.col(i)) + bc);
  return p;
}

Eigen::MatrixXd ToyHead::embeddings(const Eigen::MatrixXd& features) const {
  return (we * hidden(features)).colwise() + be;
}

Eigen::MatrixXd ToyHead::box_residuals(const Eigen::MatrixXd& features) const {
  return (wb * hidden(features)).colwise() + bb;
}

namespace {

struct BatchLosses {
  double lc = 0.0;
  double lb = 0.0;
  double le = 0.0;
};

/// Forward pass + loss over the given columns; when grads is non-null also
/// fills per-output gradients of the weighted total.
BatchLosses losses_on(const ToyHead& head, const ToyDataset& data,
                      const std::vector<int>& cols, const ToyHeadConfig& cfg,
                      Eigen::RowVectorXd* g_class, Eigen::MatrixXd* g_box,
                      Eigen::MatrixXd* g_emb, const Eigen::MatrixXd& hid) {
  const int b = static_cast<int>(cols.size());
  int positives = 0;
  for (int i : cols) positives += data.labels[i];
  const double denom = std::max(1, positives);

  BatchLosses out;
  for (int j = 0; j < b; ++j) {
    const int i = cols[j];
    const double z = head.wc.dot(hid.col(j)) + head.bc;
    const double p = sigmoid(z);
    const ScalarLoss fl = focal_loss(p, data.labels[i] == 1, cfg.focal);
    out.lc += fl.loss / denom;
    if (g_class) (*g_class)(j) = cfg.weights.alpha_c / denom * fl.grad * p * (1.0 - p);

    if (data.labels[i] == 1) {
      const Eigen::Vector4d pred_box = head.wb * hid.col(j) + head.bb;
      for (int d = 0; d < 4; ++d) {
        if (!std::isfinite(pred_box[d])) {  // diverged; flagged by the caller
          out.lb = std::numeric_limits<double>::infinity();
          continue;
        }
        const ScalarLoss hl = huber_loss(pred_box[d], data.box_targets(d, i), cfg.huber);
        out.lb += hl.loss / denom;
        if (g_box) (*g_box)(d, j) = cfg.weights.alpha_b / denom * hl.grad;
      }
      const Eigen::VectorXd pred_emb = head.we * hid.col(j) + head.be;
      for (int d = 0; d < pred_emb.size(); ++d) {
        const double diff = data.teacher_targets(d, i) - pred_emb[d];
        out.le += diff * diff / denom;
        if (g_emb) (*g_emb)(d, j) = cfg.weights.alpha_e / denom * (-2.0 * diff);
      }
    }
  }
  return out;
}

LossCurvePoint full_pool_point(const ToyHead& head, const ToyDataset& data,
                               const ToyHeadConfig& cfg, int iteration) {
  std::vector<int> all(data.labels.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const Eigen::MatrixXd hid = head.hidden(data.features);
  const BatchLosses l = losses_on(head, data, all, cfg, nullptr, nullptr, nullptr, hid);
  return LossCurvePoint{iteration, l.lc, l.lb, l.le,
                        total_loss(l.lc, l.lb, l.le, cfg.weights)};
}

}  // namespace

ToyTrainResult train_toy_head(const ToyDataset& data, const ToyHeadConfig& config) {
  config.validate();
  if (data.features.rows() != config.feature_dim) {
    throw ValidationError("toy trainer: feature dimension mismatch");
  }
  if (data.teacher_targets.rows() != config.student_dim) {
    throw ValidationError("toy trainer: teacher target dimension mismatch");
  }
  {
    std::set<long long> ids;
    for (long long id : data.identities) {
      if (id >= 0) ids.insert(id);
    }
    if (ids.size() < 2) throw ValidationError("toy trainer: need samples from >= 2 identities");
  }

  const int n = static_cast<int>(data.features.cols());
  ToyTrainResult result;
  ToyHead& head = result.head;

  // Fixed standardization in place of the batch-norm layer.
  head.feat_mean = data.features.rowwise().mean();
  Eigen::MatrixXd centered = data.features.colwise() - head.feat_mean;
  Eigen::VectorXd var = centered.array().square().rowwise().mean();
  head.feat_scale.resize(config.feature_dim);
  for (int d = 0; d < config.feature_dim; ++d) {
    head.feat_scale[d] = var[d] > 1e-12 ? 1.0 / std::sqrt(var[d]) : 1.0;
  }

  Rng init_rng(mix_seed(config.rng_seed, "toy-init"));
  head.w1 = random_matrix(config.hidden_dim, config.feature_dim, init_rng,
                          1.0 / std::sqrt(double(config.feature_dim)));
  head.b1 = Eigen::VectorXd::Zero(config.hidden_dim);
  // Output heads start at zero: predictions begin at the origin and the
  // early gradient scale stays bounded by the targets.
  head.wc = Eigen::RowVectorXd::Zero(config.hidden_dim);
  head.bc = 0.0;
  head.wb = Eigen::MatrixXd::Zero(4, config.hidden_dim);
  head.bb.setZero();
  head.we = Eigen::MatrixXd::Zero(config.student_dim, config.hidden_dim);
  head.be = Eigen::VectorXd::Zero(config.student_dim);

  result.initial = full_pool_point(head, data, config, 0);

  Rng batch_rng(mix_seed(config.rng_seed, "toy-batches"));
  std::vector<int> batch(config.batch_size);
  Eigen::MatrixXd bx(config.feature_dim, config.batch_size);

  for (int it = 1; it <= config.iterations; ++it) {
    for (int j = 0; j < config.batch_size; ++j) {
      batch[j] = static_cast<int>(batch_rng.uniform_index(n));
      bx.col(j) = data.features.col(batch[j]);
    }
    const Eigen::MatrixXd xs =
        ((bx.colwise() - head.feat_mean).array().colwise() * head.feat_scale.array()).matrix();
    const Eigen::MatrixXd z1 = (head.w1 * xs).colwise() + head.b1;
    const Eigen::MatrixXd hid = z1.cwiseMax(0.0);

    Eigen::RowVectorXd g_class = Eigen::RowVectorXd::Zero(config.batch_size);
    Eigen::MatrixXd g_box = Eigen::MatrixXd::Zero(4, config.batch_size);
    Eigen::MatrixXd g_emb = Eigen::MatrixXd::Zero(config.student_dim, config.batch_size);
    const BatchLosses l = losses_on(head, data, batch, config, &g_class, &g_box, &g_emb, hid);
    if (!std::isfinite(l.lc) || !std::isfinite(l.lb) || !std::isfinite(l.le)) {
      throw ValidationError("toy trainer: non-finite loss at iteration " + std::to_string(it));
    }
    const double total = total_loss(l.lc, l.lb, l.le, config.weights);
    result.curve.push_back(LossCurvePoint{it, l.lc, l.lb, l.le, total});

    // Backprop through the shared hidden layer.
    Eigen::MatrixXd d_hid = head.wc.transpose() * g_class;
    d_hid.noalias() += head.wb.transpose() * g_box;
    d_hid.noalias() += head.we.transpose() * g_emb;
    const Eigen::MatrixXd d_z1 =
        (z1.array() > 0.0).template cast<double>().matrix().cwiseProduct(d_hid);

    const double lr = config.learning_rate;
    head.wc -= lr * (g_class * hid.transpose());
    head.bc -= lr * g_class.sum();
    head.wb -= lr * (g_box * hid.transpose());
    head.bb -= lr * g_box.rowwise().sum();
    head.we -= lr * (g_emb * hid.transpose());
    head.be -= lr * g_emb.rowwise().sum();
    head.w1 -= lr * (d_z1 * xs.transpose());
    head.b1 -= lr * d_z1.rowwise().sum();
  }

  result.final = full_pool_point(head, data, config, config.iterations);
  return result;
}

double retrieval_top1(const ToyHead& head, const ToyDataset& data) {
  if (data.holdout_identities.empty()) throw ValidationError("retrieval: no held-out samples");

  // Gallery: per-identity mean of the normalized training embeddings.
  const Eigen::MatrixXd train_emb = head.embeddings(data.features);
  Eigen::MatrixXd gallery = Eigen::MatrixXd::Zero(train_emb.rows(), data.identity_count);
  std::vector<int> counts(data.identity_count, 0);
  for (int i = 0; i < train_emb.cols(); ++i) {
    const long long id = data.identities[i];
    if (id < 0) continue;
    Eigen::VectorXd e = train_emb.col(i);
    const double norm = e.norm();
    if (norm > 1e-12) gallery.col(id) += e / norm;
    ++counts[id];
  }
  for (int k = 0; k < data.identity_count; ++k) {
    const double norm = gallery.col(k).norm();
    if (norm > 1e-12) gallery.col(k) /= norm;
  }

  const Eigen::MatrixXd query_emb = head.embeddings(data.holdout_features);
  int hits = 0;
  for (int q = 0; q < query_emb.cols(); ++q) {
    Eigen::VectorXd e = query_emb.col(q);
    const double norm = e.norm();
    if (norm > 1e-12) e /= norm;
    Eigen::Index best = 0;
    (gallery.transpose() * e).maxCoeff(&best);
    if (best == data.holdout_identities[q]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(query_emb.cols());
}

std::string write_loss_curve(const std::vector<LossCurvePoint>& curve) {
  std::string out;
  for (const auto& p : curve) {
    out += std::to_string(p.iteration);
    for (double v : {p.loss_c, p.loss_b, p.loss_e, p.total}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dtrack
