// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "numfmt.hpp"

#include <charconv>
#include <cmath>

#include "errors.hpp"

namespace dtrack {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_float32(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(value));
  return std::string(buf, res.ptr);
}

namespace {

void trim(std::string_view& s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
}

}  // namespace

double parse_double(std::string_view token, int line_no) {
  trim(token);
  double out = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
    throw ValidationError("line " + std::to_string(line_no) + ": not a number: '" +
                          std::string(token) + "'");
  }
  return out;
}

long long parse_int(std::string_view token, int line_no) {
  trim(token);
  long long out = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
    throw ValidationError("line " + std::to_string(line_no) + ": not an integer: '" +
                          std::string(token) + "'");
  }
  return out;
}

}  // namespace dtrack
