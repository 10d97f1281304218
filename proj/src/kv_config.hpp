// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <map>
#include <string>
#include <vector>

namespace dtrack {

// Flat `key=value` text document: one pair per line, '#' starts a comment,
// blank lines ignored. Diff-friendly and trivially parsed anywhere.
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap load_kv_file(const std::string& path);
std::string serialize_kv(const KvMap& kv);

// Typed readers. Each consumes the key so the caller can reject leftovers.
class KvReader {
 public:
  explicit KvReader(KvMap kv) : kv_(std::move(kv)) {}

  double get_double(const std::string& key, double fallback);
  long long get_int(const std::string& key, long long fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::string get_string(const std::string& key, std::string fallback);
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback);
  std::vector<int> get_ints(const std::string& key, std::vector<int> fallback);

  /// Throws ValidationError naming any key that was never consumed.
  void reject_unknown(const std::string& context) const;

 private:
  std::string take(const std::string& key, bool& present);
  KvMap kv_;
};

}  // namespace dtrack
