// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "distill.hpp"
#include "errors.hpp"
#include "kv_config.hpp"
#include "numfmt.hpp"
#include "rng.hpp"

namespace dtrack {

void ScenarioConfig::validate() const {
  if (identity_count < 1 || frame_count < 1) {
    throw ValidationError("scenario: identity_count and frame_count must be >= 1");
  }
  if (!(image_width > 0.0) || !(image_height > 0.0)) {
    throw ValidationError("scenario: image dimensions must be positive");
  }
  if (!(box_height_min > 0.0) || box_height_max < box_height_min) {
    throw ValidationError("scenario: box height range invalid");
  }
  if (!(box_aspect_min > 0.0) || box_aspect_max < box_aspect_min) {
    throw ValidationError("scenario: box aspect range invalid");
  }
  if (speed_min < 0.0 || speed_max < speed_min) {
    throw ValidationError("scenario: speed range invalid");
  }
  for (double rate : {direction_change_prob, dropout_rate, false_positive_rate}) {
    if (rate < 0.0 || rate > 1.0) throw ValidationError("scenario: rates must be in [0,1]");
  }
  if (detection_noise_sigma < 0.0 || embedding_noise_sigma < 0.0) {
    throw ValidationError("scenario: noise sigmas must be >= 0");
  }
  if (occlusion_count < 0 || occlusion_length < 0) {
    throw ValidationError("scenario: occlusion settings must be >= 0");
  }
  if (embedding_dim < 1) throw ValidationError("scenario: embedding_dim must be >= 1");
  if (box_height_max > image_height || box_height_max * box_aspect_max > image_width) {
    throw ValidationError("scenario: boxes do not fit in the image");
  }
}

ScenarioConfig parse_scenario_config(const std::string& text) {
  KvReader kv(parse_kv_text(text));
  ScenarioConfig c;
  c.identity_count = static_cast<int>(kv.get_int("identity_count", c.identity_count));
  c.frame_count = static_cast<int>(kv.get_int("frame_count", c.frame_count));
  c.image_width = kv.get_double("image_width", c.image_width);
  c.image_height = kv.get_double("image_height", c.image_height);
  c.box_height_min = kv.get_double("box_height_min", c.box_height_min);
  c.box_height_max = kv.get_double("box_height_max", c.box_height_max);
  c.box_aspect_min = kv.get_double("box_aspect_min", c.box_aspect_min);
  c.box_aspect_max = kv.get_double("box_aspect_max", c.box_aspect_max);
  c.speed_min = kv.get_double("speed_min", c.speed_min);
  c.speed_max = kv.get_double("speed_max", c.speed_max);
  c.direction_change_prob = kv.get_double("direction_change_prob", c.direction_change_prob);
  c.occlusion_count = static_cast<int>(kv.get_int("occlusion_count", c.occlusion_count));
  c.occlusion_length = static_cast<int>(kv.get_int("occlusion_length", c.occlusion_length));
  c.detection_noise_sigma = kv.get_double("detection_noise_sigma", c.detection_noise_sigma);
  c.dropout_rate = kv.get_double("dropout_rate", c.dropout_rate);
  c.false_positive_rate = kv.get_double("false_positive_rate", c.false_positive_rate);
  c.embedding_noise_sigma = kv.get_double("embedding_noise_sigma", c.embedding_noise_sigma);
  c.embedding_dim = static_cast<int>(kv.get_int("embedding_dim", c.embedding_dim));
  c.seed = kv.get_u64("seed", c.seed);
  kv.reject_unknown("scenario config");
  c.validate();
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  return parse_scenario_config(serialize_kv(load_kv_file(path)));
}

namespace {

constexpr long long kFalsePositiveIdBase = 1000000;

std::uint64_t detection_nonce(int frame, long long identity) {
  return (static_cast<std::uint64_t>(frame) << 32) ^ static_cast<std::uint64_t>(identity);
}

struct Trajectory {
  double w = 0.0;
  double h = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  int occlusion_start = -1;
  int occlusion_end = -1;  // exclusive
};

Box trajectory_box(const Trajectory& t) {
  return Box{t.cx - 0.5 * t.w, t.cy - 0.5 * t.h, t.cx + 0.5 * t.w, t.cy + 0.5 * t.h};
}

// Advance one frame; reflect at the borders so the box stays inside.
void advance(Trajectory& t, double width, double height) {
  t.cx += t.vx;
  t.cy += t.vy;
  const double half_w = 0.5 * t.w;
  const double half_h = 0.5 * t.h;
  if (t.cx < half_w) {
    t.cx = half_w;
    t.vx = std::abs(t.vx);
  } else if (t.cx > width - half_w) {
    t.cx = width - half_w;
    t.vx = -std::abs(t.vx);
  }
  if (t.cy < half_h) {
    t.cy = half_h;
    t.vy = std::abs(t.vy);
  } else if (t.cy > height - half_h) {
    t.cy = height - half_h;
    t.vy = -std::abs(t.vy);
  }
}

Box noisy_box(const Box& b, double sigma, Rng& rng, double width, double height) {
  Box out = b;
  if (sigma > 0.0) {
    out.x_min += sigma * rng.gaussian();
    out.y_min += sigma * rng.gaussian();
    out.x_max += sigma * rng.gaussian();
    out.y_max += sigma * rng.gaussian();
    if (out.x_max < out.x_min + 1.0) out.x_max = out.x_min + 1.0;
    if (out.y_max < out.y_min + 1.0) out.y_max = out.y_min + 1.0;
  }
  out = clip(out, width, height);
  if (out.width() < 1.0) {
    out.x_min = std::max(0.0, out.x_max - 1.0);
    out.x_max = out.x_min + 1.0;
  }
  if (out.height() < 1.0) {
    out.y_min = std::max(0.0, out.y_max - 1.0);
    out.y_max = out.y_min + 1.0;
  }
  return out;
}

}  // namespace

Scenario synth_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario s;
  s.config = cfg;

  Rng init_rng(mix_seed(cfg.seed, "scenario-init"));
  std::vector<Trajectory> tracks(cfg.identity_count);
  for (auto& t : tracks) {
    t.h = init_rng.uniform(cfg.box_height_min, cfg.box_height_max);
    t.w = t.h * init_rng.uniform(cfg.box_aspect_min, cfg.box_aspect_max);
    t.cx = init_rng.uniform(0.5 * t.w, cfg.image_width - 0.5 * t.w);
    t.cy = init_rng.uniform(0.5 * t.h, cfg.image_height - 0.5 * t.h);
    const double speed = init_rng.uniform(cfg.speed_min, cfg.speed_max);
    const double angle = init_rng.uniform(0.0, 2.0 * M_PI);
    t.vx = speed * std::cos(angle);
    t.vy = speed * std::sin(angle);
  }
  for (int o = 0; o < cfg.occlusion_count && cfg.occlusion_length > 0; ++o) {
    const int who = static_cast<int>(init_rng.uniform_index(cfg.identity_count));
    // Keep identities visible in the first frame so every track gets born.
    const int latest_start = std::max(2, cfg.frame_count - cfg.occlusion_length);
    const int start = 2 + static_cast<int>(init_rng.uniform_index(
                              std::max(1, latest_start - 1)));
    tracks[who].occlusion_start = start;
    tracks[who].occlusion_end = start + cfg.occlusion_length;
  }

  Rng event_rng(mix_seed(cfg.seed, "scenario-events"));
  long long next_fp_id = kFalsePositiveIdBase;

  s.gt.reserve(cfg.frame_count);
  s.detections.resize(cfg.frame_count);
  s.det_identities.resize(cfg.frame_count);
  s.det_nonces.resize(cfg.frame_count);

  for (int frame = 1; frame <= cfg.frame_count; ++frame) {
    GtFrame gt_frame;
    gt_frame.frame = frame;
    auto& dets = s.detections[frame - 1];
    auto& ids = s.det_identities[frame - 1];
    auto& nonces = s.det_nonces[frame - 1];

    for (int k = 0; k < cfg.identity_count; ++k) {
      Trajectory& t = tracks[k];
      if (frame > 1) {
        if (cfg.direction_change_prob > 0.0 &&
            event_rng.uniform() < cfg.direction_change_prob) {
          const double speed = std::hypot(t.vx, t.vy);
          const double angle = event_rng.uniform(0.0, 2.0 * M_PI);
          t.vx = speed * std::cos(angle);
          t.vy = speed * std::sin(angle);
        }
        advance(t, cfg.image_width, cfg.image_height);
      }
      const bool occluded = frame >= t.occlusion_start && frame < t.occlusion_end;
      if (occluded) continue;

      const Box gt_box = trajectory_box(t);
      gt_frame.entries.push_back(GtEntry{k, gt_box});

      if (cfg.dropout_rate > 0.0 && event_rng.uniform() < cfg.dropout_rate) continue;
      ScoredDetection det;
      det.box = noisy_box(gt_box, cfg.detection_noise_sigma, event_rng, cfg.image_width,
                          cfg.image_height);
      det.score = cfg.detection_noise_sigma > 0.0 ? event_rng.uniform(0.55, 1.0) : 1.0;
      const std::uint64_t nonce = detection_nonce(frame, k);
      det.embedding = synthetic_oracle_embed(k, cfg.embedding_noise_sigma, cfg.seed,
                                             static_cast<size_t>(cfg.embedding_dim), nonce);
      dets.push_back(std::move(det));
      ids.push_back(k);
      nonces.push_back(nonce);
    }

    if (cfg.false_positive_rate > 0.0) {
      for (int slot = 0; slot < cfg.identity_count; ++slot) {
        if (event_rng.uniform() >= cfg.false_positive_rate) continue;
        const double h = event_rng.uniform(cfg.box_height_min, cfg.box_height_max);
        const double w = h * event_rng.uniform(cfg.box_aspect_min, cfg.box_aspect_max);
        const double cx = event_rng.uniform(0.5 * w, cfg.image_width - 0.5 * w);
        const double cy = event_rng.uniform(0.5 * h, cfg.image_height - 0.5 * h);
        ScoredDetection det;
        det.box = Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
        det.score = event_rng.uniform(0.55, 1.0);
        const long long fp_id = next_fp_id++;
        const std::uint64_t nonce = detection_nonce(frame, fp_id);
        det.embedding = synthetic_oracle_embed(fp_id, cfg.embedding_noise_sigma, cfg.seed,
                                               static_cast<size_t>(cfg.embedding_dim), nonce);
        dets.push_back(std::move(det));
        ids.push_back(fp_id);
        nonces.push_back(nonce);
      }
    }
    s.gt.push_back(std::move(gt_frame));
  }
  return s;
}

MotSequence scenario_gt_to_mot(const Scenario& s) {
  MotSequence out;
  out.reserve(s.gt.size());
  for (const auto& f : s.gt) {
    MotFrame mf;
    mf.frame = f.frame;
    for (const auto& e : f.entries) mf.rows.push_back(make_mot_row(f.frame, e.id, e.box, 1.0));
    out.push_back(std::move(mf));
  }
  return out;
}

MotSequence scenario_detections_to_mot(const Scenario& s) {
  MotSequence out;
  out.reserve(s.detections.size());
  for (size_t i = 0; i < s.detections.size(); ++i) {
    MotFrame mf;
    mf.frame = static_cast<int>(i) + 1;
    for (const auto& d : s.detections[i]) {
      MotRow row = make_mot_row(mf.frame, -1, d.box, d.score);
      row.embedding = d.embedding;
      mf.rows.push_back(std::move(row));
    }
    out.push_back(std::move(mf));
  }
  return out;
}

std::string write_identity_map(const Scenario& s) {
  std::string out = "# columns: frame,det_index,identity,nonce\n";
  for (size_t i = 0; i < s.det_identities.size(); ++i) {
    for (size_t d = 0; d < s.det_identities[i].size(); ++d) {
      out += std::to_string(i + 1) + "," + std::to_string(d) + "," +
             std::to_string(s.det_identities[i][d]) + "," +
             std::to_string(s.det_nonces[i][d]) + "\n";
    }
  }
  return out;
}

std::vector<IdentityMapEntry> parse_identity_map(const std::string& text) {
  std::vector<IdentityMapEntry> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view sv(line);
    size_t start = 0;
    for (size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        fields.push_back(sv.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 4) {
      throw ValidationError("identity map line " + std::to_string(line_no) +
                            ": expected 4 fields");
    }
    IdentityMapEntry e;
    e.frame = static_cast<int>(parse_int(fields[0], line_no));
    e.det_index = static_cast<int>(parse_int(fields[1], line_no));
    e.identity = parse_int(fields[2], line_no);
    const long long nonce = parse_int(fields[3], line_no);
    if (nonce < 0) throw ValidationError("identity map line " + std::to_string(line_no) +
                                         ": nonce must be >= 0");
    e.nonce = static_cast<std::uint64_t>(nonce);
    out.push_back(e);
  }
  return out;
}

}  // namespace dtrack
