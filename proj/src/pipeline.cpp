// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "augmented_io.hpp"
#include "distill.hpp"
#include "errors.hpp"
#include "numfmt.hpp"
#include "scenario.hpp"
#include "toy_head.hpp"
#include "tracker.hpp"

namespace dtrack {

GtSequence mot_to_gt(const MotSequence& frames) {
  GtSequence out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    GtFrame gf;
    gf.frame = f.frame;
    for (const auto& r : f.rows) {
      if (r.conf == 0.0) continue;  // inactive gt rows are ignored
      if (r.id < 0) throw ValidationError("ground truth rows must carry ids >= 0");
      if (!(r.w > 0.0) || !(r.h > 0.0)) {
        throw ValidationError("ground truth boxes must have positive size");
      }
      gf.entries.push_back(GtEntry{r.id, r.box()});
    }
    out.push_back(std::move(gf));
  }
  return out;
}

HypSequence mot_to_hyp(const MotSequence& frames) {
  HypSequence out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    HypFrame hf;
    hf.frame = f.frame;
    for (const auto& r : f.rows) hf.entries.push_back(HypEntry{r.id, r.box(), r.conf});
    out.push_back(std::move(hf));
  }
  return out;
}

namespace {

size_t file_size_bytes(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat: " + path);
  return static_cast<size_t>(size);
}

std::map<std::string, std::string> parse_spec_options(const std::string& spec) {
  std::map<std::string, std::string> out;
  std::string token;
  for (size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ',') {
      if (!token.empty()) {
        const size_t eq = token.find('=');
        if (eq == std::string::npos) {
          throw ValidationError("embedder spec: expected key=value, got '" + token + "'");
        }
        out[token.substr(0, eq)] = token.substr(eq + 1);
      }
      token.clear();
    } else {
      token += spec[i];
    }
  }
  return out;
}

std::unique_ptr<EmbedderInterface> make_embedder(const std::string& spec,
                                                 const MotSequence& detections,
                                                 const RunConfig& cfg) {
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    DistilledDataset ds = load_augmented_file(path);
    return std::make_unique<PrecomputedEmbedder>(std::move(ds.records), ds.metadata, path);
  }
  if (spec == "oracle" || spec.rfind("oracle:", 0) == 0) {
    auto options = parse_spec_options(spec.size() > 6 ? spec.substr(7) : "");
    if (!options.count("map")) {
      throw ValidationError("oracle embedder needs an identity map: oracle:map=<path>");
    }
    const std::string map_path = options["map"];
    std::ifstream in(map_path, std::ios::binary);
    if (!in) throw IoError("cannot open identity map: " + map_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto entries = parse_identity_map(text);

    double sigma = options.count("sigma") ? parse_double(options["sigma"], 0) : 0.0;
    std::uint64_t seed = options.count("seed")
                             ? static_cast<std::uint64_t>(parse_int(options["seed"], 0))
                             : cfg.seed;
    size_t dt = options.count("dt") ? static_cast<size_t>(parse_int(options["dt"], 0))
                                    : cfg.teacher_dim;
    auto embedder = std::make_unique<SyntheticOracleEmbedder>(dt, sigma, seed);

    std::map<int, const MotFrame*> by_frame;
    for (const auto& f : detections) by_frame[f.frame] = &f;
    for (const auto& e : entries) {
      auto it = by_frame.find(e.frame);
      if (it == by_frame.end() ||
          e.det_index >= static_cast<int>(it->second->rows.size()) || e.det_index < 0) {
        throw ValidationError("identity map: no detection at frame " + std::to_string(e.frame) +
                              " index " + std::to_string(e.det_index));
      }
      embedder->register_identity(std::to_string(e.frame),
                                  it->second->rows[e.det_index].box(), e.identity, e.nonce);
    }
    embedder->freeze();
    return embedder;
  }
  throw ValidationError("unknown embedder spec '" + spec + "' (use file:<path> or oracle:...)");
}

}  // namespace

DistillSummary run_distill(const std::string& detections_path, const std::string& embedder_spec,
                           const RunConfig& cfg, const std::string& out_path, bool binary) {
  const MotSequence detections = load_mot_file(detections_path);
  const auto embedder = make_embedder(embedder_spec, detections, cfg);

  std::vector<DetectionRecord> records;
  records.reserve(total_rows(detections));
  for (const auto& f : detections) {
    for (const auto& r : f.rows) {
      records.push_back(DetectionRecord{std::to_string(f.frame), r.box(), 0});
    }
  }
  const DistilledDataset ds = distill_dataset(records, *embedder);
  save_augmented_file(ds, out_path, binary);

  DistillSummary summary;
  summary.record_count = ds.records.size();
  summary.teacher_dim = ds.metadata.teacher_dim;
  summary.base_bytes = file_size_bytes(detections_path);
  summary.overhead = storage_overhead(summary.record_count, summary.teacher_dim,
                                      summary.base_bytes, ds.metadata.float_width);
  return summary;
}

void run_track(const std::string& detections_path, const RunConfig& cfg,
               const std::string& out_path) {
  cfg.validate();
  const MotSequence detections = load_mot_file(detections_path);
  std::map<int, const MotFrame*> by_frame;
  int max_frame = 0;
  for (const auto& f : detections) {
    by_frame[f.frame] = &f;
    max_frame = std::max(max_frame, f.frame);
  }

  Tracker tracker(cfg.association);
  MotSequence results;
  for (int frame = 1; frame <= max_frame; ++frame) {
    std::vector<ScoredDetection> dets;
    auto it = by_frame.find(frame);
    if (it != by_frame.end()) {
      for (const auto& r : it->second->rows) {
        ScoredDetection d;
        d.box = r.box();
        d.score = r.conf;
        if (!r.embedding.empty()) {
          if (r.embedding.size() < cfg.student_dim) {
            throw ValidationError("frame " + std::to_string(frame) +
                                  ": embedding has fewer than ds values");
          }
          d.embedding = normalize_embedding(
              Embedding(r.embedding.begin(),
                        r.embedding.begin() + static_cast<long>(cfg.student_dim)));
        }
        dets.push_back(std::move(d));
      }
    }
    const std::vector<TrackOutput> outputs = tracker.step(dets);
    MotFrame mf;
    mf.frame = frame;
    for (const auto& o : outputs) {
      mf.rows.push_back(make_mot_row(frame, o.track_id, o.box, o.score));
    }
    if (!mf.rows.empty()) results.push_back(std::move(mf));
  }
  save_mot_file(results, out_path);
}

SequenceEval run_eval(const std::string& gt_path, const std::string& result_path,
                      const std::string& detections_path, const std::string& report_path) {
  const GtSequence gts = mot_to_gt(load_mot_file(gt_path));
  const HypSequence hyps = mot_to_hyp(load_mot_file(result_path));
  HypSequence dets;
  const bool with_dets = !detections_path.empty();
  if (with_dets) dets = mot_to_hyp(load_mot_file(detections_path));

  const std::string name = std::filesystem::path(result_path).stem().string();
  const SequenceEval eval =
      evaluate_sequence(name, gts, hyps, with_dets ? &dets : nullptr);
  std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + report_path);
  out << format_report({eval});
  if (!out) throw IoError("write failed: " + report_path);
  return eval;
}

void run_synth(const std::string& scenario_path, const std::string& out_dir) {
  const ScenarioConfig cfg = load_scenario_config(scenario_path);
  const Scenario scenario = synth_scenario(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + out_dir);

  save_mot_file(scenario_gt_to_mot(scenario), out_dir + "/gt.txt");
  save_mot_file(scenario_detections_to_mot(scenario), out_dir + "/det.txt");
  std::ofstream map_out(out_dir + "/identity_map.txt", std::ios::binary | std::ios::trunc);
  if (!map_out) throw IoError("cannot write: " + out_dir + "/identity_map.txt");
  map_out << write_identity_map(scenario);
  if (!map_out) throw IoError("write failed: " + out_dir + "/identity_map.txt");
}

TraintoySummary run_traintoy(const RunConfig& cfg, const std::string& losscurve_path) {
  cfg.validate();
  const ToyDataset data = make_toy_dataset(cfg.toy_data_spec());
  const ToyTrainResult result = train_toy_head(data, cfg.toy_head_config());

  std::vector<LossCurvePoint> curve;
  curve.push_back(result.initial);
  curve.insert(curve.end(), result.curve.begin(), result.curve.end());
  std::ofstream out(losscurve_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + losscurve_path);
  out << write_loss_curve(curve);
  if (!out) throw IoError("write failed: " + losscurve_path);

  TraintoySummary summary;
  summary.initial_le = result.initial.loss_e;
  summary.final_le = result.final.loss_e;
  summary.retrieval_top1 = retrieval_top1(result.head, data);
  return summary;
}

}  // namespace dtrack
