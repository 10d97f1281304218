// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "kv_config.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "numfmt.hpp"

namespace dtrack {

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(strip(cur));
  return out;
}

}  // namespace

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = strip(t.substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (kv.count(key)) {
      throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                            "'");
    }
    kv[key] = strip(t.substr(eq + 1));
  }
  return kv;
}

KvMap load_kv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

std::string serialize_kv(const KvMap& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::string KvReader::take(const std::string& key, bool& present) {
  auto it = kv_.find(key);
  if (it == kv_.end()) {
    present = false;
    return "";
  }
  present = true;
  std::string v = it->second;
  kv_.erase(it);
  return v;
}

double KvReader::get_double(const std::string& key, double fallback) {
  bool present = false;
  const std::string v = take(key, present);
  if (!present) return fallback;
  try {
    return parse_double(v, 0);
  } catch (const ValidationError&) {
    throw ValidationError("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long KvReader::get_int(const std::string& key, long long fallback) {
  bool present = false;
  const std::string v = take(key, present);
  if (!present) return fallback;
  try {
    return parse_int(v, 0);
  } catch (const ValidationError&) {
    throw ValidationError("config key '" + key + "': not an integer: '" + v + "'");
  }
}

std::uint64_t KvReader::get_u64(const std::string& key, std::uint64_t fallback) {
  bool present = false;
  const std::string v = take(key, present);
  if (!present) return fallback;
  try {
    const long long parsed = parse_int(v, 0);
    if (parsed < 0) throw ValidationError("negative");
    return static_cast<std::uint64_t>(parsed);
  } catch (const ValidationError&) {
    throw ValidationError("config key '" + key + "': not a non-negative integer: '" + v + "'");
  }
}

std::string KvReader::get_string(const std::string& key, std::string fallback) {
  bool present = false;
  std::string v = take(key, present);
  return present ? v : fallback;
}

std::vector<double> KvReader::get_doubles(const std::string& key, std::vector<double> fallback) {
  bool present = false;
  const std::string v = take(key, present);
  if (!present) return fallback;
  std::vector<double> out;
  for (const std::string& tok : split_commas(v)) {
    try {
      out.push_back(parse_double(tok, 0));
    } catch (const ValidationError&) {
      throw ValidationError("config key '" + key + "': bad list element '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> KvReader::get_ints(const std::string& key, std::vector<int> fallback) {
  bool present = false;
  const std::string v = take(key, present);
  if (!present) return fallback;
  std::vector<int> out;
  for (const std::string& tok : split_commas(v)) {
    try {
      out.push_back(static_cast<int>(parse_int(tok, 0)));
    } catch (const ValidationError&) {
      throw ValidationError("config key '" + key + "': bad list element '" + tok + "'");
    }
  }
  return out;
}

void KvReader::reject_unknown(const std::string& context) const {
  if (kv_.empty()) return;
  std::string keys;
  for (const auto& [k, _] : kv_) {
    if (!keys.empty()) keys += ", ";
    keys += k;
  }
  throw ValidationError(context + ": unknown key(s): " + keys);
}

}  // namespace dtrack
