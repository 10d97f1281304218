// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "assignment.hpp"
#include "errors.hpp"
#include "numfmt.hpp"

namespace dtrack {

namespace {

void check_unique_ids_gt(const GtFrame& f) {
  std::set<long long> seen;
  for (const auto& e : f.entries) {
    if (!seen.insert(e.id).second) {
      throw ValidationError("frame " + std::to_string(f.frame) + ": duplicate gt id " +
                            std::to_string(e.id));
    }
  }
}

void check_unique_ids_hyp(const HypFrame& f) {
  std::set<long long> seen;
  for (const auto& e : f.entries) {
    if (!seen.insert(e.id).second) {
      throw ValidationError("frame " + std::to_string(f.frame) + ": duplicate hypothesis id " +
                            std::to_string(e.id));
    }
  }
}

/// Frame-aligned view over two sequences (union of frame indices, ascending).
template <typename A, typename B>
std::vector<std::pair<const A*, const B*>> align_frames(const std::vector<A>& a,
                                                        const std::vector<B>& b) {
  std::map<int, std::pair<const A*, const B*>> merged;
  for (const auto& f : a) merged[f.frame].first = &f;
  for (const auto& f : b) merged[f.frame].second = &f;
  std::vector<std::pair<const A*, const B*>> out;
  out.reserve(merged.size());
  for (const auto& [frame, pair] : merged) out.push_back(pair);
  return out;
}

}  // namespace

std::optional<double> average_precision(const HypSequence& detections, const GtSequence& gts,
                                        double iou_thresh) {
  long long total_gt = 0;
  for (const auto& f : gts) total_gt += static_cast<long long>(f.entries.size());
  if (total_gt == 0) return std::nullopt;

  struct Pooled {
    int frame;
    size_t order;  // position within the frame, for stable ranking
    const HypEntry* det;
  };
  std::vector<Pooled> pooled;
  for (const auto& f : detections) {
    for (size_t i = 0; i < f.entries.size(); ++i) {
      pooled.push_back(Pooled{f.frame, i, &f.entries[i]});
    }
  }
  std::stable_sort(pooled.begin(), pooled.end(), [](const Pooled& a, const Pooled& b) {
    if (a.det->score != b.det->score) return a.det->score > b.det->score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.order < b.order;
  });

  std::map<int, const GtFrame*> gt_by_frame;
  for (const auto& f : gts) gt_by_frame[f.frame] = &f;
  std::map<int, std::vector<char>> gt_used;
  for (const auto& f : gts) gt_used[f.frame].assign(f.entries.size(), 0);

  // Greedy TP assignment in score order, then the all-point interpolated
  // precision envelope.
  std::vector<char> is_tp(pooled.size(), 0);
  for (size_t k = 0; k < pooled.size(); ++k) {
    auto it = gt_by_frame.find(pooled[k].frame);
    if (it == gt_by_frame.end()) continue;
    const GtFrame& gf = *it->second;
    std::vector<char>& used = gt_used[pooled[k].frame];
    double best = 0.0;
    int best_g = -1;
    for (size_t g = 0; g < gf.entries.size(); ++g) {
      if (used[g]) continue;
      const double v = iou(pooled[k].det->box, gf.entries[g].box);
      if (v >= iou_thresh && v > best) {
        best = v;
        best_g = static_cast<int>(g);
      }
    }
    if (best_g >= 0) {
      used[best_g] = 1;
      is_tp[k] = 1;
    }
  }

  std::vector<double> precisions(pooled.size());
  std::vector<double> recalls(pooled.size());
  long long tp = 0;
  for (size_t k = 0; k < pooled.size(); ++k) {
    tp += is_tp[k];
    precisions[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recalls[k] = static_cast<double>(tp) / static_cast<double>(total_gt);
  }
  for (size_t k = precisions.size(); k-- > 1;) {
    precisions[k - 1] = std::max(precisions[k - 1], precisions[k]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t k = 0; k < pooled.size(); ++k) {
    ap += (recalls[k] - prev_recall) * precisions[k];
    prev_recall = recalls[k];
  }
  return ap;
}

ClearResult clear_metrics(const GtSequence& gts, const HypSequence& hyps, double iou_thresh) {
  for (const auto& f : gts) check_unique_ids_gt(f);
  for (const auto& f : hyps) check_unique_ids_hyp(f);

  ClearResult out;
  double motp_sum = 0.0;
  std::map<long long, long long> last_hyp_of_gt;   // across the whole sequence
  std::map<long long, long long> prev_frame_pair;  // previous frame's matches
  std::map<long long, long long> gt_present, gt_matched;

  for (const auto& [gf, hf] : align_frames(gts, hyps)) {
    const std::vector<GtEntry> empty_g;
    const std::vector<HypEntry> empty_h;
    const auto& G = gf ? gf->entries : empty_g;
    const auto& H = hf ? hf->entries : empty_h;
    out.total_gt += static_cast<long long>(G.size());

    std::vector<char> g_done(G.size(), 0), h_done(H.size(), 0);
    std::vector<std::pair<size_t, size_t>> matches;

    // Carry over still-valid pairings from the previous frame.
    for (size_t g = 0; g < G.size(); ++g) {
      auto it = prev_frame_pair.find(G[g].id);
      if (it == prev_frame_pair.end()) continue;
      for (size_t h = 0; h < H.size(); ++h) {
        if (!h_done[h] && H[h].id == it->second) {
          if (iou(G[g].box, H[h].box) >= iou_thresh) {
            matches.emplace_back(g, h);
            g_done[g] = 1;
            h_done[h] = 1;
          }
          break;
        }
      }
    }

    // Remaining pairs by minimum-cost assignment on 1 - IoU.
    std::vector<size_t> g_rest, h_rest;
    for (size_t g = 0; g < G.size(); ++g) {
      if (!g_done[g]) g_rest.push_back(g);
    }
    for (size_t h = 0; h < H.size(); ++h) {
      if (!h_done[h]) h_rest.push_back(h);
    }
    if (!g_rest.empty() && !h_rest.empty()) {
      Eigen::MatrixXd cost(g_rest.size(), h_rest.size());
      for (size_t r = 0; r < g_rest.size(); ++r) {
        for (size_t c = 0; c < h_rest.size(); ++c) {
          const double v = iou(G[g_rest[r]].box, H[h_rest[c]].box);
          cost(r, c) = v < iou_thresh ? kForbiddenCost : 1.0 - v;
        }
      }
      for (const auto& [r, c] : solve_assignment(cost).pairs) {
        matches.emplace_back(g_rest[r], h_rest[c]);
      }
    }

    prev_frame_pair.clear();
    for (const auto& [g, h] : matches) {
      out.total_matches += 1;
      motp_sum += 1.0 - iou(G[g].box, H[h].box);
      auto it = last_hyp_of_gt.find(G[g].id);
      if (it != last_hyp_of_gt.end() && it->second != H[h].id) out.idsw += 1;
      last_hyp_of_gt[G[g].id] = H[h].id;
      prev_frame_pair[G[g].id] = H[h].id;
      gt_matched[G[g].id] += 1;
    }
    out.fn += static_cast<long long>(G.size()) - static_cast<long long>(matches.size());
    out.fp += static_cast<long long>(H.size()) - static_cast<long long>(matches.size());
    for (const auto& g : G) gt_present[g.id] += 1;
  }

  if (out.total_gt > 0) {
    out.mota = 1.0 - static_cast<double>(out.fn + out.fp + out.idsw) /
                         static_cast<double>(out.total_gt);
  }
  out.motp = out.total_matches > 0 ? motp_sum / static_cast<double>(out.total_matches) : 0.0;

  out.gt_identities = static_cast<int>(gt_present.size());
  for (const auto& [id, present] : gt_present) {
    const double ratio =
        static_cast<double>(gt_matched.count(id) ? gt_matched[id] : 0) / present;
    if (ratio >= 0.8) out.mt += 1;
    if (ratio <= 0.2) out.ml += 1;
  }
  if (out.gt_identities > 0) {
    out.mt_ratio = static_cast<double>(out.mt) / static_cast<double>(out.gt_identities);
    out.ml_ratio = static_cast<double>(out.ml) / static_cast<double>(out.gt_identities);
  }
  return out;
}

IdfResult idf1(const GtSequence& gts, const HypSequence& hyps, double iou_thresh) {
  for (const auto& f : gts) check_unique_ids_gt(f);
  for (const auto& f : hyps) check_unique_ids_hyp(f);

  IdfResult out;
  std::map<long long, int> gt_ids, hyp_ids;
  for (const auto& f : gts) {
    out.total_gt += static_cast<long long>(f.entries.size());
    for (const auto& e : f.entries) gt_ids.emplace(e.id, 0);
  }
  for (const auto& f : hyps) {
    out.total_hyp += static_cast<long long>(f.entries.size());
    for (const auto& e : f.entries) hyp_ids.emplace(e.id, 0);
  }
  int next = 0;
  for (auto& [id, idx] : gt_ids) idx = next++;
  next = 0;
  for (auto& [id, idx] : hyp_ids) idx = next++;

  if (out.total_gt == 0 && out.total_hyp == 0) {
    out.idf1 = out.idp = out.idr = 1.0;
    return out;
  }

  // Per-frame binary co-occurrence counts between identity pairs.
  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(std::max<size_t>(gt_ids.size(), 1),
                                                  std::max<size_t>(hyp_ids.size(), 1));
  for (const auto& [gf, hf] : align_frames(gts, hyps)) {
    if (!gf || !hf) continue;
    for (const auto& g : gf->entries) {
      for (const auto& h : hf->entries) {
        if (iou(g.box, h.box) >= iou_thresh) {
          overlap(gt_ids[g.id], hyp_ids[h.id]) += 1.0;
        }
      }
    }
  }

  long long idtp = 0;
  if (!gt_ids.empty() && !hyp_ids.empty()) {
    const AssignmentResult best = solve_assignment(
        Eigen::MatrixXd(-overlap.topLeftCorner(gt_ids.size(), hyp_ids.size())));
    idtp = static_cast<long long>(std::llround(-best.cost));
  }
  out.idtp = idtp;
  out.idp = out.total_hyp > 0 ? static_cast<double>(idtp) / static_cast<double>(out.total_hyp)
                              : (out.total_gt == 0 ? 1.0 : 0.0);
  out.idr = out.total_gt > 0 ? static_cast<double>(idtp) / static_cast<double>(out.total_gt)
                             : (out.total_hyp == 0 ? 1.0 : 0.0);
  out.idf1 = 2.0 * static_cast<double>(idtp) / static_cast<double>(out.total_gt + out.total_hyp);
  return out;
}

SequenceEval evaluate_sequence(const std::string& name, const GtSequence& gts,
                               const HypSequence& hyps, const HypSequence* detections,
                               double iou_thresh) {
  SequenceEval out;
  out.name = name;
  out.clear = clear_metrics(gts, hyps, iou_thresh);
  out.idf = idf1(gts, hyps, iou_thresh);
  if (detections) out.ap = average_precision(*detections, gts, iou_thresh);
  return out;
}

namespace {

void append_record(std::string& out, const std::string& label, const SequenceEval& s) {
  out += "sequence: " + label + "\n";
  out += "  gt_boxes: " + std::to_string(s.clear.total_gt) + "\n";
  out += "  hyp_boxes: " + std::to_string(s.idf.total_hyp) + "\n";
  out += "  mota: " + (s.clear.mota ? format_double(*s.clear.mota) : std::string("undefined")) +
         "\n";
  out += "  motp: " + format_double(s.clear.motp) + "\n";
  out += "  fp: " + std::to_string(s.clear.fp) + "\n";
  out += "  fn: " + std::to_string(s.clear.fn) + "\n";
  out += "  idsw: " + std::to_string(s.clear.idsw) + "\n";
  out += "  mt: " + std::to_string(s.clear.mt) + "\n";
  out += "  ml: " + std::to_string(s.clear.ml) + "\n";
  out += "  mt_ratio: " + format_double(s.clear.mt_ratio) + "\n";
  out += "  ml_ratio: " + format_double(s.clear.ml_ratio) + "\n";
  out += "  idf1: " + format_double(s.idf.idf1) + "\n";
  out += "  idp: " + format_double(s.idf.idp) + "\n";
  out += "  idr: " + format_double(s.idf.idr) + "\n";
  if (s.ap) out += "  ap: " + format_double(*s.ap) + "\n";
}

}  // namespace

std::string format_report(const std::vector<SequenceEval>& sequences) {
  std::string out;
  for (const auto& s : sequences) append_record(out, s.name, s);

  // Aggregate: counts summed, ratios recomputed from the pooled counts.
  SequenceEval agg;
  agg.name = "aggregate";
  double motp_weighted = 0.0;
  double ap_sum = 0.0;
  int ap_count = 0;
  for (const auto& s : sequences) {
    agg.clear.total_gt += s.clear.total_gt;
    agg.clear.total_matches += s.clear.total_matches;
    agg.clear.fp += s.clear.fp;
    agg.clear.fn += s.clear.fn;
    agg.clear.idsw += s.clear.idsw;
    agg.clear.mt += s.clear.mt;
    agg.clear.ml += s.clear.ml;
    agg.clear.gt_identities += s.clear.gt_identities;
    motp_weighted += s.clear.motp * static_cast<double>(s.clear.total_matches);
    agg.idf.idtp += s.idf.idtp;
    agg.idf.total_gt += s.idf.total_gt;
    agg.idf.total_hyp += s.idf.total_hyp;
    if (s.ap) {
      ap_sum += *s.ap;
      ++ap_count;
    }
  }
  if (agg.clear.total_gt > 0) {
    agg.clear.mota = 1.0 - static_cast<double>(agg.clear.fn + agg.clear.fp + agg.clear.idsw) /
                               static_cast<double>(agg.clear.total_gt);
  }
  agg.clear.motp = agg.clear.total_matches > 0
                       ? motp_weighted / static_cast<double>(agg.clear.total_matches)
                       : 0.0;
  if (agg.clear.gt_identities > 0) {
    agg.clear.mt_ratio =
        static_cast<double>(agg.clear.mt) / static_cast<double>(agg.clear.gt_identities);
    agg.clear.ml_ratio =
        static_cast<double>(agg.clear.ml) / static_cast<double>(agg.clear.gt_identities);
  }
  if (agg.idf.total_gt + agg.idf.total_hyp > 0) {
    agg.idf.idf1 = 2.0 * static_cast<double>(agg.idf.idtp) /
                   static_cast<double>(agg.idf.total_gt + agg.idf.total_hyp);
    agg.idf.idp = agg.idf.total_hyp > 0
                      ? static_cast<double>(agg.idf.idtp) / static_cast<double>(agg.idf.total_hyp)
                      : (agg.idf.total_gt == 0 ? 1.0 : 0.0);
    agg.idf.idr = agg.idf.total_gt > 0
                      ? static_cast<double>(agg.idf.idtp) / static_cast<double>(agg.idf.total_gt)
                      : (agg.idf.total_hyp == 0 ? 1.0 : 0.0);
  } else {
    agg.idf.idf1 = agg.idf.idp = agg.idf.idr = 1.0;
  }
  if (ap_count > 0) agg.ap = ap_sum / ap_count;
  append_record(out, agg.name, agg);
  return out;
}

}  // namespace dtrack
