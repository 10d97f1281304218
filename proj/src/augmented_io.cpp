// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "augmented_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "kv_config.hpp"
#include "numfmt.hpp"

namespace dtrack {

namespace {

constexpr char kMagic[8] = {'D', 'T', 'R', 'K', 'A', 'U', 'G', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_f32(std::string& out, double v) {
  const float f = static_cast<float>(v);
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

class ByteCursor {
 public:
  ByteCursor(const std::string& bytes) : bytes_(bytes) {}

  size_t offset() const { return pos_; }

  void need(size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw IoError("augmented binary: truncated at byte offset " + std::to_string(bytes_.size()) +
                    " (needed " + std::to_string(pos_ + n) + ")");
    }
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  float f32() {
    const std::uint32_t bits = u32();
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }

  std::string str(size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const std::string& bytes_;
  size_t pos_ = 0;
};

void check_record(const AugmentedRecord& r, size_t index, size_t teacher_dim) {
  if (r.image_id.find(',') != std::string::npos || r.image_id.find('\n') != std::string::npos) {
    throw ValidationError("augmented record " + std::to_string(index) +
                          ": image_id must not contain ',' or newline");
  }
  if (r.teacher.size() != teacher_dim) {
    throw ValidationError("augmented record " + std::to_string(index) +
                          ": teacher dimension mismatch");
  }
}

}  // namespace

std::string write_augmented_text(const DistilledDataset& ds) {
  std::string out;
  out += "dt=" + std::to_string(ds.metadata.teacher_dim) + "\n";
  out += "embedder=" + ds.metadata.embedder_name + "\n";
  out += "crop=" + ds.metadata.crop_contract + "\n";
  out += "seed=" + std::to_string(ds.metadata.seed) + "\n";
  out += "float_width=" + std::to_string(ds.metadata.float_width) + "\n";
  out += "---\n";
  for (size_t i = 0; i < ds.records.size(); ++i) {
    const AugmentedRecord& r = ds.records[i];
    check_record(r, i, ds.metadata.teacher_dim);
    out += r.image_id;
    for (double v : {r.box.x_min, r.box.y_min, r.box.x_max, r.box.y_max}) {
      out += ',';
      out += format_double(v);
    }
    for (double v : r.teacher) {
      out += ',';
      out += format_float32(v);
    }
    out += '\n';
  }
  return out;
}

DistilledDataset parse_augmented_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string header;
  int line_no = 0;
  bool saw_sep = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      saw_sep = true;
      break;
    }
    header += line;
    header += '\n';
  }
  if (!saw_sep) throw ValidationError("augmented text: missing '---' header terminator");

  KvReader kv(parse_kv_text(header));
  DistilledDataset ds;
  ds.metadata.teacher_dim = static_cast<size_t>(kv.get_int("dt", 0));
  ds.metadata.embedder_name = kv.get_string("embedder", "");
  ds.metadata.crop_contract = kv.get_string("crop", std::string(kDefaultCropContract));
  ds.metadata.seed = kv.get_u64("seed", 0);
  ds.metadata.float_width = static_cast<int>(kv.get_int("float_width", 4));
  kv.reject_unknown("augmented header");
  if (ds.metadata.teacher_dim == 0) throw ValidationError("augmented header: dt must be > 0");

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    {
      std::string_view sv(line);
      size_t start = 0;
      for (size_t i = 0; i <= sv.size(); ++i) {
        if (i == sv.size() || sv[i] == ',') {
          fields.push_back(sv.substr(start, i - start));
          start = i + 1;
        }
      }
    }
    if (fields.size() != 5 + ds.metadata.teacher_dim) {
      throw ValidationError("augmented text line " + std::to_string(line_no) + ": expected " +
                            std::to_string(5 + ds.metadata.teacher_dim) + " fields, got " +
                            std::to_string(fields.size()));
    }
    AugmentedRecord r;
    r.image_id = std::string(fields[0]);
    r.box = Box{parse_double(fields[1], line_no), parse_double(fields[2], line_no),
                parse_double(fields[3], line_no), parse_double(fields[4], line_no)};
    r.teacher.reserve(ds.metadata.teacher_dim);
    for (size_t i = 5; i < fields.size(); ++i) r.teacher.push_back(parse_double(fields[i], line_no));
    ds.records.push_back(std::move(r));
  }
  return ds;
}

std::string write_augmented_binary(const DistilledDataset& ds) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(ds.metadata.teacher_dim));
  put_u32(out, static_cast<std::uint32_t>(ds.metadata.float_width));
  put_u64(out, ds.metadata.seed);
  put_u32(out, static_cast<std::uint32_t>(ds.metadata.embedder_name.size()));
  out += ds.metadata.embedder_name;
  put_u32(out, static_cast<std::uint32_t>(ds.metadata.crop_contract.size()));
  out += ds.metadata.crop_contract;
  put_u64(out, ds.records.size());
  for (size_t i = 0; i < ds.records.size(); ++i) {
    const AugmentedRecord& r = ds.records[i];
    check_record(r, i, ds.metadata.teacher_dim);
    put_u32(out, static_cast<std::uint32_t>(r.image_id.size()));
    out += r.image_id;
    put_f32(out, r.box.x_min);
    put_f32(out, r.box.y_min);
    put_f32(out, r.box.x_max);
    put_f32(out, r.box.y_max);
    for (double v : r.teacher) put_f32(out, v);
  }
  return out;
}

DistilledDataset parse_augmented_binary(const std::string& bytes) {
  ByteCursor cur(bytes);
  if (cur.str(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw ValidationError("augmented binary: bad magic");
  }
  DistilledDataset ds;
  ds.metadata.teacher_dim = cur.u32();
  ds.metadata.float_width = static_cast<int>(cur.u32());
  ds.metadata.seed = cur.u64();
  ds.metadata.embedder_name = cur.str(cur.u32());
  ds.metadata.crop_contract = cur.str(cur.u32());
  if (ds.metadata.teacher_dim == 0) throw ValidationError("augmented binary: dt must be > 0");
  const std::uint64_t count = cur.u64();
  ds.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    AugmentedRecord r;
    r.image_id = cur.str(cur.u32());
    const double x1 = cur.f32();
    const double y1 = cur.f32();
    const double x2 = cur.f32();
    const double y2 = cur.f32();
    r.box = Box{x1, y1, x2, y2};
    r.teacher.resize(ds.metadata.teacher_dim);
    for (auto& v : r.teacher) v = cur.f32();
    ds.records.push_back(std::move(r));
  }
  if (cur.offset() != bytes.size()) {
    throw IoError("augmented binary: " + std::to_string(bytes.size() - cur.offset()) +
                  " trailing bytes at offset " + std::to_string(cur.offset()));
  }
  return ds;
}

void save_augmented_file(const DistilledDataset& ds, const std::string& path, bool binary) {
  const std::string payload = binary ? write_augmented_binary(ds) : write_augmented_text(ds);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed: " + path);
}

DistilledDataset load_augmented_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  if (bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0) {
    return parse_augmented_binary(bytes);
  }
  return parse_augmented_text(bytes);
}

size_t embedding_payload_bytes(const DistilledDataset& ds) {
  return ds.records.size() * ds.metadata.teacher_dim *
         static_cast<size_t>(ds.metadata.float_width);
}

}  // namespace dtrack
