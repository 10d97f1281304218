// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "distill.hpp"
#include "errors.hpp"

using namespace dtrack;

TEST_CASE("truncate keeps the leading elements and does not re-normalize") {
  const Embedding t{0.6, 0.8, 0.0, 0.0};
  CHECK(truncate_embedding(t, 4) == t);
  CHECK(truncate_embedding(t, 2) == Embedding{0.6, 0.8});
  CHECK(truncate_embedding(Embedding{1, 0, 0, 0}, 1) == Embedding{1.0});

  // prefix property and no re-normalization
  const Embedding u = make_teacher_embedding(Embedding{1.0, 2.0, 2.0, 4.0});
  for (size_t d = 1; d <= u.size(); ++d) {
    const Embedding p = truncate_embedding(u, d);
    for (size_t i = 0; i < d; ++i) CHECK(p[i] == u[i]);
  }
  const Embedding p2 = truncate_embedding(u, 2);
  CHECK(l2_norm(p2) < 1.0);  // deliberately shorter than unit

  CHECK_THROWS_AS(truncate_embedding(t, 0), ValidationError);
  CHECK_THROWS_AS(truncate_embedding(t, 5), ValidationError);
}

TEST_CASE("storage overhead accounting") {
  CHECK(storage_overhead(0, 512, 1000) == 0.0);
  CHECK(storage_overhead(1000, 512, 20480000, 4) == doctest::Approx(0.1));
  CHECK(storage_overhead(1, 1, 4, 4) == doctest::Approx(1.0));
  CHECK_THROWS_AS(storage_overhead(1, 512, 0), ValidationError);

  // linear in record count and teacher dimension
  const double base = storage_overhead(100, 64, 123456);
  CHECK(storage_overhead(200, 64, 123456) == doctest::Approx(2.0 * base));
  CHECK(storage_overhead(100, 128, 123456) == doctest::Approx(2.0 * base));
}

TEST_CASE("synthetic oracle embeddings") {
  const size_t dim = 512;
  SUBCASE("deterministic per identity and always unit norm") {
    const Embedding a = synthetic_oracle_embed(3, 0.0, 7, dim);
    const Embedding b = synthetic_oracle_embed(3, 0.0, 7, dim);
    CHECK(a == b);
    CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-9));
    const Embedding noisy = synthetic_oracle_embed(3, 0.3, 7, dim);
    CHECK(l2_norm(noisy) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a != noisy);
  }

  SUBCASE("distinct identities are near orthogonal at dim 512") {
    for (long long id = 0; id < 40; ++id) {
      const Embedding a = synthetic_oracle_embed(2 * id, 0.0, 11, dim);
      const Embedding b = synthetic_oracle_embed(2 * id + 1, 0.0, 11, dim);
      CHECK(std::abs(1.0 - cosine_distance(a, b)) < 0.3);
    }
  }

  SUBCASE("intra-identity similarity dominates inter-identity for sigma < 0.5") {
    const double sigma = 0.45;
    double intra = 0.0, inter = 0.0;
    const int pairs = 1000;
    for (int i = 0; i < pairs; ++i) {
      const long long id = i % 97;
      intra += 1.0 - cosine_distance(
                         synthetic_oracle_embed(id, sigma, 5, dim, 2 * i),
                         synthetic_oracle_embed(id, sigma, 5, dim, 2 * i + 1));
      inter += 1.0 - cosine_distance(
                         synthetic_oracle_embed(id, sigma, 5, dim, 3 * i),
                         synthetic_oracle_embed(id + 1000, sigma, 5, dim, 3 * i + 1));
    }
    CHECK(intra / pairs > inter / pairs);
  }
}

TEST_CASE("distill_dataset preserves order and is deterministic") {
  SyntheticOracleEmbedder embedder(32, 0.0, 7);
  std::vector<DetectionRecord> records;
  for (int i = 0; i < 3; ++i) {
    const Box b{10.0 * i, 0, 10.0 * i + 5, 12};
    records.push_back(DetectionRecord{"img" + std::to_string(i), b, 0});
    embedder.register_identity("img" + std::to_string(i), b, i % 2, 0);
  }

  const DistilledDataset a = distill_dataset(records, embedder);
  const DistilledDataset b = distill_dataset(records, embedder);
  REQUIRE(a.records.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(a.records[i].image_id == records[i].image_id);
    CHECK(a.records[i].box == records[i].box);
    CHECK(a.records[i].teacher == b.records[i].teacher);
  }
  CHECK(a.metadata.teacher_dim == 32);
  CHECK(a.metadata.seed == 7);
  CHECK(a.metadata.crop_contract == "256x128");

  // records 0 and 2 share identity 0 with the same nonce and zero noise
  CHECK(a.records[0].teacher == a.records[2].teacher);
  CHECK(a.records[0].teacher != a.records[1].teacher);

  SUBCASE("empty input gives empty output with valid metadata") {
    const DistilledDataset empty = distill_dataset({}, embedder);
    CHECK(empty.records.empty());
    CHECK(empty.metadata.teacher_dim == 32);
  }

  SUBCASE("a lookup miss names the offending record") {
    records.push_back(DetectionRecord{"unknown", Box{0, 0, 1, 1}, 0});
    try {
      distill_dataset(records, embedder);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("record 3") != std::string::npos);
      CHECK(std::string(e.what()).find("unknown") != std::string::npos);
    }
  }
}

TEST_CASE("precomputed embedder serves stored vectors and misses loudly") {
  std::vector<AugmentedRecord> stored;
  stored.push_back(AugmentedRecord{"f1", Box{0, 0, 4, 4}, 0,
                                   make_teacher_embedding(Embedding{1, 1, 0, 0})});
  DistillMetadata meta;
  meta.teacher_dim = 4;
  PrecomputedEmbedder embedder(stored, meta, "mem");

  CHECK(embedder.embed("f1", Box{0, 0, 4, 4}) ==
        make_teacher_embedding(Embedding{1, 1, 0, 0}));
  CHECK_THROWS_AS(embedder.embed("f1", Box{0, 0, 4, 5}), ValidationError);
  CHECK(embedder.teacher_dim() == 4);
}

TEST_CASE("teacher embeddings are stored normalized") {
  const Embedding t = make_teacher_embedding(Embedding{3, 0, 4, 0});
  CHECK(l2_norm(t) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t[0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(make_teacher_embedding(Embedding{0, 0}), ValidationError);
}
