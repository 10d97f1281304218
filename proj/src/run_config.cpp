// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "run_config.hpp"

#include "errors.hpp"
#include "kv_config.hpp"
#include "numfmt.hpp"

namespace dtrack {

void RunConfig::validate() const {
  if (teacher_dim < 1) throw ValidationError("run config: dt must be >= 1");
  if (student_dim < 1 || student_dim > teacher_dim) {
    throw ValidationError("run config: ds must be in [1, dt]");
  }
  anchors.validate();
  postprocess.validate();
  association.validate();
  loss_weights.validate();
  focal.validate();
  huber.validate();
  toy_head_config().validate();
  if (toy_identity_count < 2) throw ValidationError("run config: toy_identity_count must be >= 2");
  if (toy_samples_per_identity < 1 || toy_holdout_per_identity < 1 || toy_background_count < 0) {
    throw ValidationError("run config: toy sample counts out of range");
  }
}

ToyHeadConfig RunConfig::toy_head_config() const {
  ToyHeadConfig cfg;
  cfg.feature_dim = toy_feature_dim;
  cfg.hidden_dim = toy_hidden_dim;
  cfg.student_dim = static_cast<int>(student_dim);
  cfg.learning_rate = toy_learning_rate;
  cfg.iterations = toy_iterations;
  cfg.batch_size = toy_batch_size;
  cfg.rng_seed = seed;
  cfg.weights = loss_weights;
  cfg.focal = focal;
  cfg.huber = huber;
  return cfg;
}

ToyDataSpec RunConfig::toy_data_spec() const {
  ToyDataSpec spec;
  spec.identity_count = toy_identity_count;
  spec.samples_per_identity = toy_samples_per_identity;
  spec.holdout_per_identity = toy_holdout_per_identity;
  spec.background_count = toy_background_count;
  spec.feature_dim = toy_feature_dim;
  spec.teacher_dim = static_cast<int>(teacher_dim);
  spec.student_dim = static_cast<int>(student_dim);
  spec.seed = seed;
  return spec;
}

RunConfig parse_run_config(const std::string& text) {
  KvReader kv(parse_kv_text(text));
  RunConfig cfg;
  cfg.teacher_dim = static_cast<size_t>(kv.get_int("dt", static_cast<long long>(cfg.teacher_dim)));
  cfg.student_dim =
      static_cast<size_t>(kv.get_int("ds", static_cast<long long>(cfg.student_dim)));
  cfg.seed = kv.get_u64("seed", cfg.seed);

  cfg.anchors.levels = kv.get_ints("anchor_levels", cfg.anchors.levels);
  cfg.anchors.scales_per_level = static_cast<int>(
      kv.get_int("anchor_scales_per_level", cfg.anchors.scales_per_level));
  cfg.anchors.aspect_ratios = kv.get_doubles("anchor_aspect_ratios", cfg.anchors.aspect_ratios);
  cfg.anchors.base_size_multiplier =
      kv.get_double("anchor_base_size_multiplier", cfg.anchors.base_size_multiplier);
  cfg.anchors.positive_iou = kv.get_double("anchor_positive_iou", cfg.anchors.positive_iou);
  cfg.anchors.negative_iou = kv.get_double("anchor_negative_iou", cfg.anchors.negative_iou);

  cfg.postprocess.score_threshold =
      kv.get_double("post_score_threshold", cfg.postprocess.score_threshold);
  cfg.postprocess.nms_iou = kv.get_double("post_nms_iou", cfg.postprocess.nms_iou);
  cfg.postprocess.max_detections =
      static_cast<int>(kv.get_int("post_max_detections", cfg.postprocess.max_detections));

  cfg.association.embedding_distance_threshold = kv.get_double(
      "assoc_embedding_distance_threshold", cfg.association.embedding_distance_threshold);
  cfg.association.motion_gate_threshold =
      kv.get_double("assoc_motion_gate_threshold", cfg.association.motion_gate_threshold);
  cfg.association.fusion_lambda =
      kv.get_double("assoc_fusion_lambda", cfg.association.fusion_lambda);
  cfg.association.iou_fallback_threshold =
      kv.get_double("assoc_iou_fallback_threshold", cfg.association.iou_fallback_threshold);
  cfg.association.max_age =
      static_cast<int>(kv.get_int("assoc_max_age", cfg.association.max_age));
  cfg.association.n_init = static_cast<int>(kv.get_int("assoc_n_init", cfg.association.n_init));
  cfg.association.embedding_ema_momentum =
      kv.get_double("assoc_embedding_ema_momentum", cfg.association.embedding_ema_momentum);

  cfg.loss_weights.alpha_c = kv.get_double("loss_alpha_c", cfg.loss_weights.alpha_c);
  cfg.loss_weights.alpha_b = kv.get_double("loss_alpha_b", cfg.loss_weights.alpha_b);
  cfg.loss_weights.alpha_e = kv.get_double("loss_alpha_e", cfg.loss_weights.alpha_e);
  cfg.focal.alpha = kv.get_double("focal_alpha", cfg.focal.alpha);
  cfg.focal.gamma = kv.get_double("focal_gamma", cfg.focal.gamma);
  cfg.huber.delta = kv.get_double("huber_delta", cfg.huber.delta);

  cfg.toy_identity_count =
      static_cast<int>(kv.get_int("toy_identity_count", cfg.toy_identity_count));
  cfg.toy_samples_per_identity =
      static_cast<int>(kv.get_int("toy_samples_per_identity", cfg.toy_samples_per_identity));
  cfg.toy_holdout_per_identity =
      static_cast<int>(kv.get_int("toy_holdout_per_identity", cfg.toy_holdout_per_identity));
  cfg.toy_background_count =
      static_cast<int>(kv.get_int("toy_background_count", cfg.toy_background_count));
  cfg.toy_feature_dim = static_cast<int>(kv.get_int("toy_feature_dim", cfg.toy_feature_dim));
  cfg.toy_hidden_dim = static_cast<int>(kv.get_int("toy_hidden_dim", cfg.toy_hidden_dim));
  cfg.toy_learning_rate = kv.get_double("toy_learning_rate", cfg.toy_learning_rate);
  cfg.toy_iterations = static_cast<int>(kv.get_int("toy_iterations", cfg.toy_iterations));
  cfg.toy_batch_size = static_cast<int>(kv.get_int("toy_batch_size", cfg.toy_batch_size));

  kv.reject_unknown("run config");
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(serialize_kv(load_kv_file(path)));
}

std::string serialize_run_config(const RunConfig& cfg) {
  KvMap kv;
  kv["dt"] = std::to_string(cfg.teacher_dim);
  kv["ds"] = std::to_string(cfg.student_dim);
  kv["seed"] = std::to_string(cfg.seed);
  {
    std::string levels;
    for (size_t i = 0; i < cfg.anchors.levels.size(); ++i) {
      if (i) levels += ',';
      levels += std::to_string(cfg.anchors.levels[i]);
    }
    kv["anchor_levels"] = levels;
    std::string ratios;
    for (size_t i = 0; i < cfg.anchors.aspect_ratios.size(); ++i) {
      if (i) ratios += ',';
      ratios += format_double(cfg.anchors.aspect_ratios[i]);
    }
    kv["anchor_aspect_ratios"] = ratios;
  }
  kv["anchor_scales_per_level"] = std::to_string(cfg.anchors.scales_per_level);
  kv["anchor_base_size_multiplier"] = format_double(cfg.anchors.base_size_multiplier);
  kv["anchor_positive_iou"] = format_double(cfg.anchors.positive_iou);
  kv["anchor_negative_iou"] = format_double(cfg.anchors.negative_iou);
  kv["post_score_threshold"] = format_double(cfg.postprocess.score_threshold);
  kv["post_nms_iou"] = format_double(cfg.postprocess.nms_iou);
  kv["post_max_detections"] = std::to_string(cfg.postprocess.max_detections);
  kv["assoc_embedding_distance_threshold"] =
      format_double(cfg.association.embedding_distance_threshold);
  kv["assoc_motion_gate_threshold"] = format_double(cfg.association.motion_gate_threshold);
  kv["assoc_fusion_lambda"] = format_double(cfg.association.fusion_lambda);
  kv["assoc_iou_fallback_threshold"] = format_double(cfg.association.iou_fallback_threshold);
  kv["assoc_max_age"] = std::to_string(cfg.association.max_age);
  kv["assoc_n_init"] = std::to_string(cfg.association.n_init);
  kv["assoc_embedding_ema_momentum"] = format_double(cfg.association.embedding_ema_momentum);
  kv["loss_alpha_c"] = format_double(cfg.loss_weights.alpha_c);
  kv["loss_alpha_b"] = format_double(cfg.loss_weights.alpha_b);
  kv["loss_alpha_e"] = format_double(cfg.loss_weights.alpha_e);
  kv["focal_alpha"] = format_double(cfg.focal.alpha);
  kv["focal_gamma"] = format_double(cfg.focal.gamma);
  kv["huber_delta"] = format_double(cfg.huber.delta);
  kv["toy_identity_count"] = std::to_string(cfg.toy_identity_count);
  kv["toy_samples_per_identity"] = std::to_string(cfg.toy_samples_per_identity);
  kv["toy_holdout_per_identity"] = std::to_string(cfg.toy_holdout_per_identity);
  kv["toy_background_count"] = std::to_string(cfg.toy_background_count);
  kv["toy_feature_dim"] = std::to_string(cfg.toy_feature_dim);
  kv["toy_hidden_dim"] = std::to_string(cfg.toy_hidden_dim);
  kv["toy_learning_rate"] = format_double(cfg.toy_learning_rate);
  kv["toy_iterations"] = std::to_string(cfg.toy_iterations);
  kv["toy_batch_size"] = std::to_string(cfg.toy_batch_size);
  return serialize_kv(kv);
}

}  // namespace dtrack
