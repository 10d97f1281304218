// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace dtrack {

constexpr size_t kDefaultTeacherDim = 512;
constexpr std::string_view kDefaultCropContract = "256x128";

/// Teacher embeddings are stored L2-normalized (unit norm within 1e-6).
/// make_teacher_embedding normalizes; a zero vector is rejected.
Embedding make_teacher_embedding(Embedding values);

/// First dim elements of the teacher vector, deliberately not re-normalized.
Embedding truncate_embedding(const Embedding& teacher, size_t dim);

/// One row of a detection dataset. image_id is an opaque identifier (for
/// synthetic sequences it is the frame number as text).
struct DetectionRecord {
  std::string image_id;
  Box box;
  int class_id = 0;  // single 'person' class
};

/// A detection record augmented with its pseudo ground-truth embedding.
struct AugmentedRecord {
  std::string image_id;
  Box box;
  int class_id = 0;
  Embedding teacher;
};

/// Provenance header carried by every augmented dataset.
struct DistillMetadata {
  size_t teacher_dim = kDefaultTeacherDim;
  std::string embedder_name;
  std::string crop_contract{kDefaultCropContract};  // input resolution the teacher expects
  std::uint64_t seed = 0;
  int float_width = 4;  // bytes per stored element
};

/// Produces a teacher embedding for an (image_id, box) pair. Implementations
/// must be safe for concurrent embed() calls (declared via thread_safe).
class EmbedderInterface {
 public:
  virtual ~EmbedderInterface() = default;
  virtual Embedding embed(const std::string& image_id, const Box& box) const = 0;
  virtual size_t teacher_dim() const = 0;
  virtual std::string name() const = 0;
  virtual std::string crop_contract() const { return std::string(kDefaultCropContract); }
  virtual std::uint64_t seed() const { return 0; }
  virtual bool thread_safe() const = 0;
};

/// Stand-in for a pre-trained Re-ID network: a seeded pseudo-random unit
/// vector per identity, plus optional isotropic noise, re-normalized. The
/// identity behind an (image_id, box) pair comes from an injected resolver.
class SyntheticOracleEmbedder : public EmbedderInterface {
 public:
  struct IdentityKey {
    std::string image_id;
    std::string box_key;
    bool operator<(const IdentityKey& o) const;
  };
  struct IdentityEntry {
    long long identity = 0;
    std::uint64_t nonce = 0;  // decorrelates the noise draw per occurrence
  };

  SyntheticOracleEmbedder(size_t teacher_dim, double noise_sigma, std::uint64_t seed);

  /// Registers which identity (and noise nonce) an (image_id, box) pair maps to.
  void register_identity(const std::string& image_id, const Box& box, long long identity,
                         std::uint64_t nonce);

  /// Sorts the registration table. Concurrent embed() calls are safe only
  /// after the table is frozen; embed() freezes lazily otherwise.
  void freeze() const;

  Embedding embed(const std::string& image_id, const Box& box) const override;
  size_t teacher_dim() const override { return teacher_dim_; }
  std::string name() const override;
  std::uint64_t seed() const override { return seed_; }
  bool thread_safe() const override { return true; }

  /// The deterministic per-identity vector with noise applied, independent of
  /// any registered boxes.
  Embedding embed_identity(long long identity, std::uint64_t nonce) const;

 private:
  size_t teacher_dim_;
  double noise_sigma_;
  std::uint64_t seed_;
  mutable std::vector<std::pair<IdentityKey, IdentityEntry>> entries_;  // sorted once frozen
  mutable bool frozen_ = false;
};

/// Pure form of the oracle: deterministic unit vector for (identity, seed),
/// perturbed by noise_sigma and re-normalized.
Embedding synthetic_oracle_embed(long long identity, double noise_sigma, std::uint64_t seed,
                                 size_t teacher_dim = kDefaultTeacherDim,
                                 std::uint64_t nonce = 0);

/// Looks embeddings up in a previously written augmented dataset, keyed by
/// (image_id, box).
class PrecomputedEmbedder : public EmbedderInterface {
 public:
  PrecomputedEmbedder(std::vector<AugmentedRecord> records, DistillMetadata meta,
                      std::string source_name);

  Embedding embed(const std::string& image_id, const Box& box) const override;
  size_t teacher_dim() const override { return meta_.teacher_dim; }
  std::string name() const override { return "file:" + source_name_; }
  std::string crop_contract() const override { return meta_.crop_contract; }
  std::uint64_t seed() const override { return meta_.seed; }
  bool thread_safe() const override { return true; }

 private:
  std::vector<std::pair<std::string, Embedding>> lookup_;  // sorted by key
  DistillMetadata meta_;
  std::string source_name_;
};

struct DistilledDataset {
  std::vector<AugmentedRecord> records;
  DistillMetadata metadata;
};

/// Attaches one teacher embedding per record, order preserved. Idempotent and
/// deterministic for the oracle/file embedders; a lookup miss names the
/// offending record.
DistilledDataset distill_dataset(const std::vector<DetectionRecord>& records,
                                 const EmbedderInterface& embedder);

/// (record_count * teacher_dim * float_width) / base_bytes.
double storage_overhead(size_t record_count, size_t teacher_dim, size_t base_bytes,
                        int float_width = 4);

/// Stable text key for a box, shared by the identity map and the lookup
/// embedders so keys written by one side match the other exactly.
std::string box_key(const Box& b);

}  // namespace dtrack
