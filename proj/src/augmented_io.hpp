// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <string>

#include "distill.hpp"

namespace dtrack {

// Augmented dataset files carry a metadata header (teacher dim, embedder
// name, crop contract, seed, float width) followed by one record per line:
// image_id, box corners, then the teacher values. Values are stored at
// 4-byte float precision in both layouts.
//
// Text layout:
//   dt=<int> / embedder=<name> / crop=<WxH> / seed=<u64> / float_width=<int>
//   ---
//   image_id,x_min,y_min,x_max,y_max,v1,...,vDt
//
// Binary layout (all little-endian, record-major):
//   magic "DTRKAUG1" (8 bytes)
//   u32 teacher_dim, u32 float_width (=4), u64 seed,
//   u32 name_len + name bytes, u32 crop_len + crop bytes,
//   u64 record_count
//   per record: u32 image_id_len + bytes, 4 x f32 box corners, Dt x f32 values

std::string write_augmented_text(const DistilledDataset& ds);
DistilledDataset parse_augmented_text(const std::string& text);

std::string write_augmented_binary(const DistilledDataset& ds);
DistilledDataset parse_augmented_binary(const std::string& bytes);

void save_augmented_file(const DistilledDataset& ds, const std::string& path,
                         bool binary = false);
/// Sniffs the layout from the magic bytes.
DistilledDataset load_augmented_file(const std::string& path);

/// Byte size of the binary layout's embedding payload alone; matches
/// storage_overhead's accounting exactly.
size_t embedding_payload_bytes(const DistilledDataset& ds);

}  // namespace dtrack
