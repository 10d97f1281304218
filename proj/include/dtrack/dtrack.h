/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 distilltrack contributors
 *
 * C API of the distilltrack shared library: an embedding-distillation and
 * tracking-by-detection toolkit. All functions return dtrack_status; on
 * failure dtrack_last_error() carries a message for the calling thread.
 * Handles are opaque and must be released with their _free function.
 */

#ifndef DTRACK_DTRACK_H_
#define DTRACK_DTRACK_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtrack_status {
  DTRACK_OK = 0,
  DTRACK_ERR_INVALID = 1, /* bad arguments, malformed data, failed validation */
  DTRACK_ERR_IO = 2,      /* missing, unreadable or truncated files */
  DTRACK_ERR_INTERNAL = 3
} dtrack_status;

const char* dtrack_version(void);

/* Message describing the last failure on this thread; empty string if none.
 * Valid until the next dtrack_* call on the same thread. */
const char* dtrack_last_error(void);

/* ---------------------------------------------------------------- config */

/* Flat key=value run configuration. A fresh handle carries the documented
 * defaults; load/set validate values and reject unknown keys. */
typedef struct dtrack_config dtrack_config;

dtrack_config* dtrack_config_new(void);
dtrack_status dtrack_config_load(dtrack_config* cfg, const char* path);
dtrack_status dtrack_config_set(dtrack_config* cfg, const char* key, const char* value);
/* Copies the value for `key` into buf (NUL terminated). */
dtrack_status dtrack_config_get(const dtrack_config* cfg, const char* key, char* buf,
                                size_t buf_size);
void dtrack_config_free(dtrack_config* cfg);

/* --------------------------------------------------------------- tracker */

typedef struct dtrack_tracker dtrack_tracker;

typedef struct dtrack_detection {
  double x_min, y_min, x_max, y_max;
  double score;
  const double* embedding; /* may be NULL */
  size_t embedding_size;
} dtrack_detection;

typedef struct dtrack_track {
  long long track_id;
  double x_min, y_min, x_max, y_max;
} dtrack_track;

/* cfg may be NULL for defaults. */
dtrack_tracker* dtrack_tracker_new(const dtrack_config* cfg);

/* Advances one frame. On success *out_tracks points to an array of *out_count
 * confirmed tracks updated this frame; release it with dtrack_tracks_free. */
dtrack_status dtrack_tracker_step(dtrack_tracker* tracker, const dtrack_detection* detections,
                                  size_t detection_count, dtrack_track** out_tracks,
                                  size_t* out_count);
void dtrack_tracks_free(dtrack_track* tracks);
void dtrack_tracker_free(dtrack_tracker* tracker);

/* ------------------------------------------------------- file pipelines */

/* Distill a MOT detection file into an augmented dataset file. embedder_spec
 * is "file:<augmented file>" or "oracle:map=<identity map>[,sigma=..][,seed=..]".
 * out_overhead (nullable) receives embedding bytes / input file bytes. */
dtrack_status dtrack_run_distill(const char* detections_path, const char* embedder_spec,
                                 const dtrack_config* cfg, const char* out_path,
                                 int binary_layout, double* out_overhead);

dtrack_status dtrack_run_track(const char* detections_path, const dtrack_config* cfg,
                               const char* out_path);

/* detections_path may be NULL; then the report carries no AP. */
dtrack_status dtrack_run_eval(const char* gt_path, const char* result_path,
                              const char* detections_path, const char* report_path);

dtrack_status dtrack_run_synth(const char* scenario_path, const char* out_dir);

typedef struct dtrack_traintoy_result {
  double initial_le;
  double final_le;
  double retrieval_top1;
} dtrack_traintoy_result;

dtrack_status dtrack_run_traintoy(const dtrack_config* cfg, const char* losscurve_path,
                                  dtrack_traintoy_result* out_result /* nullable */);

/* Built-in oracle checks (gradients, assignment, metrics). Diagnostics go to
 * stderr; returns DTRACK_OK only if every check passed. */
dtrack_status dtrack_run_selftest(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DTRACK_DTRACK_H_ */
