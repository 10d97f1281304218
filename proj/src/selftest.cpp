// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "assignment.hpp"
#include "errors.hpp"
#include "losses.hpp"
#include "rng.hpp"

namespace dtrack {

namespace {

void enumerate_rows(const Eigen::MatrixXd& cost, int row, std::vector<char>& used_col,
                    int card, double acc, BruteForceAssignment& best) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (card + (rows - row) < best.cardinality) return;  // cannot beat the best cardinality
  if (row == rows) {
    if (card > best.cardinality ||
        (card == best.cardinality && acc < best.cost - 1e-12)) {
      best.cardinality = card;
      best.cost = acc;
    }
    return;
  }
  for (int c = 0; c < cols; ++c) {
    if (used_col[c] || !std::isfinite(cost(row, c))) continue;
    used_col[c] = 1;
    enumerate_rows(cost, row + 1, used_col, card + 1, acc + cost(row, c), best);
    used_col[c] = 0;
  }
  enumerate_rows(cost, row + 1, used_col, card, acc, best);  // leave this row unmatched
}

}  // namespace

BruteForceAssignment brute_force_assignment(const Eigen::MatrixXd& cost) {
  BruteForceAssignment best;
  best.cardinality = -1;
  std::vector<char> used(cost.cols(), 0);
  enumerate_rows(cost, 0, used, 0, 0.0, best);
  if (best.cardinality < 0) {
    best.cardinality = 0;
    best.cost = 0.0;
  }
  return best;
}

ClearResult oracle_clear_metrics(const GtSequence& gts, const HypSequence& hyps,
                                 double iou_thresh) {
  ClearResult out;
  double motp_sum = 0.0;
  std::map<long long, long long> last_hyp_of_gt;
  std::map<long long, long long> prev_frame_pair;
  std::map<long long, long long> gt_present, gt_matched;

  std::map<int, const GtFrame*> gt_by_frame;
  std::map<int, const HypFrame*> hyp_by_frame;
  std::set<int> frames;
  for (const auto& f : gts) {
    gt_by_frame[f.frame] = &f;
    frames.insert(f.frame);
  }
  for (const auto& f : hyps) {
    hyp_by_frame[f.frame] = &f;
    frames.insert(f.frame);
  }

  for (int frame : frames) {
    const std::vector<GtEntry> empty_g;
    const std::vector<HypEntry> empty_h;
    const auto& G = gt_by_frame.count(frame) ? gt_by_frame[frame]->entries : empty_g;
    const auto& H = hyp_by_frame.count(frame) ? hyp_by_frame[frame]->entries : empty_h;
    out.total_gt += static_cast<long long>(G.size());

    std::vector<char> g_done(G.size(), 0), h_done(H.size(), 0);
    std::vector<std::pair<size_t, size_t>> matches;
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

    std::vector<size_t> g_rest, h_rest;
    for (size_t g = 0; g < G.size(); ++g) {
      if (!g_done[g]) g_rest.push_back(g);
    }
    for (size_t h = 0; h < H.size(); ++h) {
      if (!h_done[h]) h_rest.push_back(h);
    }
    if (!g_rest.empty() && !h_rest.empty()) {
      // Exhaustive enumeration of the best remaining matching.
      Eigen::MatrixXd cost(g_rest.size(), h_rest.size());
      for (size_t r = 0; r < g_rest.size(); ++r) {
        for (size_t c = 0; c < h_rest.size(); ++c) {
          const double v = iou(G[g_rest[r]].box, H[h_rest[c]].box);
          cost(r, c) = v < iou_thresh ? kForbiddenCost : 1.0 - v;
        }
      }
      const BruteForceAssignment target = brute_force_assignment(cost);
      // Recover one matching achieving the target by re-enumeration.
      std::vector<std::pair<int, int>> chosen;
      std::vector<std::pair<int, int>> current;
      std::vector<char> used(h_rest.size(), 0);
      std::function<bool(int, int, double)> rec = [&](int row, int card, double acc) -> bool {
        if (row == static_cast<int>(g_rest.size())) {
          if (card == target.cardinality && std::abs(acc - target.cost) <= 1e-9) {
            chosen = current;
            return true;
          }
          return false;
        }
        for (int c = 0; c < static_cast<int>(h_rest.size()); ++c) {
          if (used[c] || !std::isfinite(cost(row, c))) continue;
          used[c] = 1;
          current.emplace_back(row, c);
          if (rec(row + 1, card + 1, acc + cost(row, c))) return true;
          current.pop_back();
          used[c] = 0;
        }
        return rec(row + 1, card, acc);
      };
      rec(0, 0, 0.0);
      for (const auto& [r, c] : chosen) matches.emplace_back(g_rest[r], h_rest[c]);
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
    out.mt_ratio = static_cast<double>(out.mt) / out.gt_identities;
    out.ml_ratio = static_cast<double>(out.ml) / out.gt_identities;
  }
  return out;
}

IdfResult oracle_idf1(const GtSequence& gts, const HypSequence& hyps, double iou_thresh) {
  IdfResult out;
  std::set<long long> gt_id_set, hyp_id_set;
  for (const auto& f : gts) {
    out.total_gt += static_cast<long long>(f.entries.size());
    for (const auto& e : f.entries) gt_id_set.insert(e.id);
  }
  for (const auto& f : hyps) {
    out.total_hyp += static_cast<long long>(f.entries.size());
    for (const auto& e : f.entries) hyp_id_set.insert(e.id);
  }
  if (out.total_gt == 0 && out.total_hyp == 0) {
    out.idf1 = out.idp = out.idr = 1.0;
    return out;
  }
  std::vector<long long> gt_ids(gt_id_set.begin(), gt_id_set.end());
  std::vector<long long> hyp_ids(hyp_id_set.begin(), hyp_id_set.end());

  std::map<std::pair<long long, long long>, long long> overlap;
  std::map<int, const HypFrame*> hyp_by_frame;
  for (const auto& f : hyps) hyp_by_frame[f.frame] = &f;
  for (const auto& gf : gts) {
    auto it = hyp_by_frame.find(gf.frame);
    if (it == hyp_by_frame.end()) continue;
    for (const auto& g : gf.entries) {
      for (const auto& h : it->second->entries) {
        if (iou(g.box, h.box) >= iou_thresh) overlap[{g.id, h.id}] += 1;
      }
    }
  }

  // Every injective gt-id -> hyp-id mapping, maximizing the total overlap.
  long long best = 0;
  std::vector<char> used(hyp_ids.size(), 0);
  std::function<void(size_t, long long)> rec = [&](size_t g, long long acc) {
    if (g == gt_ids.size()) {
      best = std::max(best, acc);
      return;
    }
    rec(g + 1, acc);  // gt identity left unmatched
    for (size_t h = 0; h < hyp_ids.size(); ++h) {
      if (used[h]) continue;
      used[h] = 1;
      auto it = overlap.find({gt_ids[g], hyp_ids[h]});
      rec(g + 1, acc + (it != overlap.end() ? it->second : 0));
      used[h] = 0;
    }
  };
  rec(0, 0);

  out.idtp = best;
  out.idp = out.total_hyp > 0 ? static_cast<double>(best) / static_cast<double>(out.total_hyp)
                              : (out.total_gt == 0 ? 1.0 : 0.0);
  out.idr = out.total_gt > 0 ? static_cast<double>(best) / static_cast<double>(out.total_gt)
                             : (out.total_hyp == 0 ? 1.0 : 0.0);
  out.idf1 = 2.0 * static_cast<double>(best) / static_cast<double>(out.total_gt + out.total_hyp);
  return out;
}

void random_small_scenario(std::uint64_t seed, GtSequence* gts, HypSequence* hyps) {
  Rng rng(mix_seed(seed, "small-scenario"));
  const int identities = 1 + static_cast<int>(rng.uniform_index(3));
  const int frames = 1 + static_cast<int>(rng.uniform_index(5));
  const int hyp_pool = 1 + static_cast<int>(rng.uniform_index(4));

  gts->clear();
  hyps->clear();
  for (int f = 1; f <= frames; ++f) {
    GtFrame gf;
    gf.frame = f;
    HypFrame hf;
    hf.frame = f;
    for (int k = 0; k < identities; ++k) {
      if (rng.uniform() < 0.25) continue;  // identity absent this frame
      const double x = rng.uniform(0.0, 80.0);
      const double y = rng.uniform(0.0, 80.0);
      const double w = rng.uniform(8.0, 20.0);
      const double h = rng.uniform(8.0, 20.0);
      gf.entries.push_back(GtEntry{k, Box{x, y, x + w, y + h}});
      if (rng.uniform() < 0.8) {
        // Hypothesis near the gt box, sometimes with a shuffled identity.
        const double jitter = rng.uniform(0.0, 6.0);
        const long long hid = rng.uniform() < 0.75
                                  ? k
                                  : static_cast<long long>(rng.uniform_index(hyp_pool));
        bool dup = false;
        for (const auto& e : hf.entries) dup = dup || e.id == hid;
        if (!dup) {
          hf.entries.push_back(
              HypEntry{hid, Box{x + jitter, y, x + jitter + w, y + h}, rng.uniform(0.1, 1.0)});
        }
      }
    }
    if (rng.uniform() < 0.3) {
      // spurious hypothesis
      const double x = rng.uniform(0.0, 90.0);
      const double y = rng.uniform(0.0, 90.0);
      const long long hid = 50 + static_cast<long long>(rng.uniform_index(3));
      bool dup = false;
      for (const auto& e : hf.entries) dup = dup || e.id == hid;
      if (!dup) {
        hf.entries.push_back(HypEntry{hid, Box{x, y, x + 10.0, y + 12.0}, rng.uniform(0.1, 1.0)});
      }
    }
    gts->push_back(std::move(gf));
    hyps->push_back(std::move(hf));
  }
}

namespace {

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

bool check_gradients(std::ostream& log) {
  Rng rng(20240501);
  FocalParams focal_params;
  HuberParams huber_params;

  std::vector<std::vector<double>> focal_samples;
  for (int i = 0; i < 100; ++i) focal_samples.push_back({rng.uniform(0.02, 0.98)});
  double worst = 0.0;
  for (bool positive : {true, false}) {
    const LossFn fn = [&](const std::vector<double>& x, std::vector<double>* grad) {
      const ScalarLoss l = focal_loss(x[0], positive, focal_params);
      if (grad) (*grad)[0] = l.grad;
      return l.loss;
    };
    worst = std::max(worst, grad_check(fn, focal_samples, 1e-6));
  }
  log << "selftest focal gradient: max rel err " << worst << "\n";
  if (worst >= 1e-4) return false;

  std::vector<std::vector<double>> huber_samples;
  while (huber_samples.size() < 100) {
    const double r = rng.uniform(-1.0, 1.0);
    if (std::abs(std::abs(r) - huber_params.delta) < 10 * 1e-6) continue;  // keep off the kink
    huber_samples.push_back({r});
  }
  const LossFn huber_fn = [&](const std::vector<double>& x, std::vector<double>* grad) {
    const ScalarLoss l = huber_loss(x[0], 0.0, huber_params);
    if (grad) (*grad)[0] = l.grad;
    return l.loss;
  };
  worst = grad_check(huber_fn, huber_samples, 1e-6);
  log << "selftest huber gradient: max rel err " << worst << "\n";
  if (worst >= 1e-4) return false;

  std::vector<std::vector<double>> emb_samples;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(8);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    emb_samples.push_back(std::move(x));
  }
  std::vector<Embedding> targets{{0.3, -0.2, 0.9, 0.0, -0.5, 0.1, 0.7, -0.8}};
  const LossFn emb_fn = [&](const std::vector<double>& x, std::vector<double>* grad) {
    const EmbeddingLoss l = embedding_loss({Embedding(x.begin(), x.end())}, targets);
    if (grad) *grad = l.grads[0];
    return l.loss;
  };
  worst = grad_check(emb_fn, emb_samples, 1e-6);
  log << "selftest embedding gradient: max rel err " << worst << "\n";
  return worst < 1e-6;
}

bool check_assignment(std::ostream& log) {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform_index(7));
    const int cols = 1 + static_cast<int>(rng.uniform_index(7));
    Eigen::MatrixXd cost(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (trial % 3 == 0 && rng.uniform() < 0.25) {
          cost(i, j) = kForbiddenCost;
        } else {
          cost(i, j) = static_cast<double>(static_cast<int>(rng.uniform_index(199)) - 50);
        }
      }
    }
    const AssignmentResult got = solve_assignment(cost);
    const BruteForceAssignment want = brute_force_assignment(cost);
    if (static_cast<int>(got.pairs.size()) != want.cardinality ||
        !close(got.cost, want.cost, 1e-6)) {
      log << "selftest assignment: mismatch at trial " << trial << " (got " << got.pairs.size()
          << "/" << got.cost << ", want " << want.cardinality << "/" << want.cost << ")\n";
      return false;
    }
  }
  log << "selftest assignment: 200 random matrices match the exhaustive oracle\n";
  return true;
}

bool check_metric_oracles(std::ostream& log) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GtSequence gts;
    HypSequence hyps;
    random_small_scenario(seed, &gts, &hyps);
    const ClearResult a = clear_metrics(gts, hyps);
    const ClearResult b = oracle_clear_metrics(gts, hyps);
    if (a.fp != b.fp || a.fn != b.fn || a.idsw != b.idsw || a.total_gt != b.total_gt ||
        a.total_matches != b.total_matches) {
      log << "selftest metrics: CLEAR mismatch at seed " << seed << "\n";
      return false;
    }
    const IdfResult x = idf1(gts, hyps);
    const IdfResult y = oracle_idf1(gts, hyps);
    if (x.idtp != y.idtp || x.total_gt != y.total_gt || x.total_hyp != y.total_hyp) {
      log << "selftest metrics: IDF1 mismatch at seed " << seed << "\n";
      return false;
    }
  }
  log << "selftest metrics: 100 random scenarios match the exhaustive oracles\n";
  return true;
}

}  // namespace

bool run_selftest(std::ostream& log) {
  bool ok = true;
  try {
    ok = check_gradients(log) && ok;
    ok = check_assignment(log) && ok;
    ok = check_metric_oracles(log) && ok;
  } catch (const std::exception& e) {
    log << "selftest: exception: " << e.what() << "\n";
    return false;
  }
  log << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
  return ok;
}

}  // namespace dtrack
