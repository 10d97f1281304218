// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "dtrack/dtrack.h"

#include <cstring>
#include <iostream>
#include <string>

#include "errors.hpp"
#include "kv_config.hpp"
#include "pipeline.hpp"
#include "run_config.hpp"
#include "selftest.hpp"
#include "tracker.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
dtrack_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return DTRACK_OK;
  } catch (const dtrack::ValidationError& e) {
    g_last_error = e.what();
    return DTRACK_ERR_INVALID;
  } catch (const dtrack::IoError& e) {
    g_last_error = e.what();
    return DTRACK_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DTRACK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DTRACK_ERR_INTERNAL;
  }
}

dtrack_status invalid(const char* msg) {
  g_last_error = msg;
  return DTRACK_ERR_INVALID;
}

}  // namespace

struct dtrack_config {
  dtrack::RunConfig cfg;
};

struct dtrack_tracker {
  explicit dtrack_tracker(const dtrack::RunConfig& run_cfg)
      : student_dim(run_cfg.student_dim), impl(run_cfg.association) {}
  size_t student_dim;
  dtrack::Tracker impl;
};

extern "C" {

const char* dtrack_version(void) { return "0.1.0"; }

const char* dtrack_last_error(void) { return g_last_error.c_str(); }

dtrack_config* dtrack_config_new(void) { return new dtrack_config(); }

dtrack_status dtrack_config_load(dtrack_config* cfg, const char* path) {
  if (!cfg || !path) return invalid("config_load: null argument");
  return wrap([&] { cfg->cfg = dtrack::load_run_config(path); });
}

dtrack_status dtrack_config_set(dtrack_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid("config_set: null argument");
  return wrap([&] {
    dtrack::KvMap kv = dtrack::parse_kv_text(dtrack::serialize_run_config(cfg->cfg));
    kv[key] = value;
    cfg->cfg = dtrack::parse_run_config(dtrack::serialize_kv(kv));
  });
}

dtrack_status dtrack_config_get(const dtrack_config* cfg, const char* key, char* buf,
                                size_t buf_size) {
  if (!cfg || !key || !buf || buf_size == 0) return invalid("config_get: null argument");
  return wrap([&] {
    const dtrack::KvMap kv = dtrack::parse_kv_text(dtrack::serialize_run_config(cfg->cfg));
    auto it = kv.find(key);
    if (it == kv.end()) throw dtrack::ValidationError(std::string("unknown key: ") + key);
    if (it->second.size() + 1 > buf_size) {
      throw dtrack::ValidationError("config_get: buffer too small");
    }
    std::memcpy(buf, it->second.c_str(), it->second.size() + 1);
  });
}

void dtrack_config_free(dtrack_config* cfg) { delete cfg; }

dtrack_tracker* dtrack_tracker_new(const dtrack_config* cfg) {
  try {
    const dtrack::RunConfig run_cfg = cfg ? cfg->cfg : dtrack::RunConfig{};
    run_cfg.validate();
    g_last_error.clear();
    return new dtrack_tracker(run_cfg);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

dtrack_status dtrack_tracker_step(dtrack_tracker* tracker, const dtrack_detection* detections,
                                  size_t detection_count, dtrack_track** out_tracks,
                                  size_t* out_count) {
  if (!tracker || !out_tracks || !out_count) return invalid("tracker_step: null argument");
  if (detection_count > 0 && !detections) return invalid("tracker_step: null detections");
  *out_tracks = nullptr;
  *out_count = 0;
  return wrap([&] {
    std::vector<dtrack::ScoredDetection> dets;
    dets.reserve(detection_count);
    for (size_t i = 0; i < detection_count; ++i) {
      const dtrack_detection& d = detections[i];
      dtrack::ScoredDetection sd;
      sd.box = dtrack::Box{d.x_min, d.y_min, d.x_max, d.y_max};
      sd.score = d.score;
      if (d.embedding && d.embedding_size > 0) {
        sd.embedding.assign(d.embedding, d.embedding + d.embedding_size);
      }
      dets.push_back(std::move(sd));
    }
    const std::vector<dtrack::TrackOutput> outputs = tracker->impl.step(dets);
    if (!outputs.empty()) {
      auto* arr = new dtrack_track[outputs.size()];
      for (size_t i = 0; i < outputs.size(); ++i) {
        arr[i] = dtrack_track{outputs[i].track_id, outputs[i].box.x_min, outputs[i].box.y_min,
                              outputs[i].box.x_max, outputs[i].box.y_max};
      }
      *out_tracks = arr;
    }
    *out_count = outputs.size();
  });
}

void dtrack_tracks_free(dtrack_track* tracks) { delete[] tracks; }

void dtrack_tracker_free(dtrack_tracker* tracker) { delete tracker; }

dtrack_status dtrack_run_distill(const char* detections_path, const char* embedder_spec,
                                 const dtrack_config* cfg, const char* out_path,
                                 int binary_layout, double* out_overhead) {
  if (!detections_path || !embedder_spec || !out_path) {
    return invalid("run_distill: null argument");
  }
  return wrap([&] {
    const dtrack::RunConfig run_cfg = cfg ? cfg->cfg : dtrack::RunConfig{};
    const dtrack::DistillSummary summary = dtrack::run_distill(
        detections_path, embedder_spec, run_cfg, out_path, binary_layout != 0);
    if (out_overhead) *out_overhead = summary.overhead;
  });
}

dtrack_status dtrack_run_track(const char* detections_path, const dtrack_config* cfg,
                               const char* out_path) {
  if (!detections_path || !out_path) return invalid("run_track: null argument");
  return wrap([&] {
    const dtrack::RunConfig run_cfg = cfg ? cfg->cfg : dtrack::RunConfig{};
    dtrack::run_track(detections_path, run_cfg, out_path);
  });
}

dtrack_status dtrack_run_eval(const char* gt_path, const char* result_path,
                              const char* detections_path, const char* report_path) {
  if (!gt_path || !result_path || !report_path) return invalid("run_eval: null argument");
  return wrap([&] {
    dtrack::run_eval(gt_path, result_path, detections_path ? detections_path : "", report_path);
  });
}

dtrack_status dtrack_run_synth(const char* scenario_path, const char* out_dir) {
  if (!scenario_path || !out_dir) return invalid("run_synth: null argument");
  return wrap([&] { dtrack::run_synth(scenario_path, out_dir); });
}

dtrack_status dtrack_run_traintoy(const dtrack_config* cfg, const char* losscurve_path,
                                  dtrack_traintoy_result* out_result) {
  if (!losscurve_path) return invalid("run_traintoy: null argument");
  return wrap([&] {
    const dtrack::RunConfig run_cfg = cfg ? cfg->cfg : dtrack::RunConfig{};
    const dtrack::TraintoySummary summary = dtrack::run_traintoy(run_cfg, losscurve_path);
    if (out_result) {
      out_result->initial_le = summary.initial_le;
      out_result->final_le = summary.final_le;
      out_result->retrieval_top1 = summary.retrieval_top1;
    }
  });
}

dtrack_status dtrack_run_selftest(void) {
  dtrack_status status = DTRACK_OK;
  const dtrack_status wrapped = wrap([&] {
    if (!dtrack::run_selftest(std::cerr)) {
      throw dtrack::ValidationError("selftest failed");
    }
  });
  status = wrapped;
  return status;
}

}  // extern "C"
