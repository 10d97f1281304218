// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "distill.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "numfmt.hpp"
#include "rng.hpp"

namespace dtrack {

Embedding make_teacher_embedding(Embedding values) {
  const double norm = l2_norm(values);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("teacher embedding must be a finite nonzero vector");
  }
  for (double& v : values) v /= norm;
  return values;
}

Embedding truncate_embedding(const Embedding& teacher, size_t dim) {
  if (dim < 1 || dim > teacher.size()) {
    throw ValidationError("truncate: dimension " + std::to_string(dim) +
                          " out of range [1, " + std::to_string(teacher.size()) + "]");
  }
  return Embedding(teacher.begin(), teacher.begin() + static_cast<long>(dim));
}

std::string box_key(const Box& b) {
  return format_double(b.x_min) + "," + format_double(b.y_min) + "," + format_double(b.x_max) +
         "," + format_double(b.y_max);
}

bool SyntheticOracleEmbedder::IdentityKey::operator<(const IdentityKey& o) const {
  if (image_id != o.image_id) return image_id < o.image_id;
  return box_key < o.box_key;
}

SyntheticOracleEmbedder::SyntheticOracleEmbedder(size_t teacher_dim, double noise_sigma,
                                                 std::uint64_t seed)
    : teacher_dim_(teacher_dim), noise_sigma_(noise_sigma), seed_(seed) {
  if (teacher_dim_ == 0) throw ValidationError("oracle embedder: teacher_dim must be > 0");
  if (noise_sigma_ < 0.0) throw ValidationError("oracle embedder: noise sigma must be >= 0");
}

void SyntheticOracleEmbedder::register_identity(const std::string& image_id, const Box& box,
                                                long long identity, std::uint64_t nonce) {
  entries_.push_back({IdentityKey{image_id, box_key(box)}, IdentityEntry{identity, nonce}});
  frozen_ = false;
}

void SyntheticOracleEmbedder::freeze() const {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  frozen_ = true;
}

std::string SyntheticOracleEmbedder::name() const {
  return "oracle(sigma=" + format_double(noise_sigma_) + ")";
}

Embedding SyntheticOracleEmbedder::embed_identity(long long identity, std::uint64_t nonce) const {
  return synthetic_oracle_embed(identity, noise_sigma_, seed_, teacher_dim_, nonce);
}

Embedding SyntheticOracleEmbedder::embed(const std::string& image_id, const Box& box) const {
  if (!frozen_) freeze();
  const IdentityKey key{image_id, box_key(box)};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const auto& e, const IdentityKey& k) { return e.first < k; });
  if (it == entries_.end() || key < it->first) {
    throw ValidationError("oracle embedder: no identity registered for image '" + image_id +
                          "' box (" + key.box_key + ")");
  }
  return embed_identity(it->second.identity, it->second.nonce);
}

Embedding synthetic_oracle_embed(long long identity, double noise_sigma, std::uint64_t seed,
                                 size_t teacher_dim, std::uint64_t nonce) {
  if (noise_sigma < 0.0) throw ValidationError("synthetic_oracle_embed: sigma must be >= 0");
  Rng base(mix_seed(mix_seed(seed, "oracle-identity"), static_cast<std::uint64_t>(identity)));
  Embedding v(teacher_dim);
  for (double& x : v) x = base.gaussian();
  if (noise_sigma > 0.0) {
    Rng noise(mix_seed(mix_seed(mix_seed(seed, "oracle-noise"),
                                static_cast<std::uint64_t>(identity)),
                       nonce));
    // Noise scale is relative to the unit base vector.
    const double base_norm = l2_norm(v);
    for (double& x : v) x /= base_norm;
    for (double& x : v) x += noise_sigma * noise.gaussian() / std::sqrt(double(teacher_dim));
  }
  return make_teacher_embedding(std::move(v));
}

PrecomputedEmbedder::PrecomputedEmbedder(std::vector<AugmentedRecord> records,
                                         DistillMetadata meta, std::string source_name)
    : meta_(std::move(meta)), source_name_(std::move(source_name)) {
  lookup_.reserve(records.size());
  for (auto& r : records) {
    lookup_.emplace_back(r.image_id + "|" + box_key(r.box), std::move(r.teacher));
  }
  std::sort(lookup_.begin(), lookup_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

Embedding PrecomputedEmbedder::embed(const std::string& image_id, const Box& box) const {
  const std::string key = image_id + "|" + box_key(box);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), key,
                             [](const auto& e, const std::string& k) { return e.first < k; });
  if (it == lookup_.end() || it->first != key) {
    throw ValidationError("precomputed embedder: no embedding for image '" + image_id +
                          "' box (" + box_key(box) + ")");
  }
  return it->second;
}

DistilledDataset distill_dataset(const std::vector<DetectionRecord>& records,
                                 const EmbedderInterface& embedder) {
  DistilledDataset out;
  out.metadata.teacher_dim = embedder.teacher_dim();
  out.metadata.embedder_name = embedder.name();
  out.metadata.crop_contract = embedder.crop_contract();
  out.metadata.seed = embedder.seed();
  out.records.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const DetectionRecord& r = records[i];
    if (!is_valid(r.box)) {
      throw ValidationError("distill: record " + std::to_string(i) + " (image '" + r.image_id +
                            "') has an invalid box");
    }
    Embedding teacher;
    try {
      teacher = embedder.embed(r.image_id, r.box);
    } catch (const ValidationError& e) {
      throw ValidationError("distill: record " + std::to_string(i) + ": " + e.what());
    }
    if (teacher.size() != out.metadata.teacher_dim) {
      throw ValidationError("distill: record " + std::to_string(i) +
                            ": teacher dimension mismatch (got " +
                            std::to_string(teacher.size()) + ", expected " +
                            std::to_string(out.metadata.teacher_dim) + ")");
    }
    out.records.push_back(AugmentedRecord{r.image_id, r.box, r.class_id, std::move(teacher)});
  }
  return out;
}

double storage_overhead(size_t record_count, size_t teacher_dim, size_t base_bytes,
                        int float_width) {
  if (base_bytes == 0) throw ValidationError("storage_overhead: base byte count must be > 0");
  if (float_width <= 0) throw ValidationError("storage_overhead: float width must be > 0");
  return static_cast<double>(record_count) * static_cast<double>(teacher_dim) *
         static_cast<double>(float_width) / static_cast<double>(base_bytes);
}

}  // namespace dtrack
