// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "mot_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "numfmt.hpp"

namespace dtrack {

MotRow make_mot_row(int frame, long long id, const Box& b, double conf) {
  MotRow row;
  row.frame = frame;
  row.id = id;
  row.x = b.x_min;
  row.y = b.y_min;
  row.w = b.width();
  row.h = b.height();
  row.conf = conf;
  return row;
}

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace

MotSequence parse_mot(std::istream& in) {
  std::map<int, std::vector<MotRow>> by_frame;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_row(line);
    if (fields.size() < 10) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 10 fields, got " +
                            std::to_string(fields.size()));
    }
    MotRow row;
    row.frame = static_cast<int>(parse_int(fields[0], line_no));
    row.id = parse_int(fields[1], line_no);
    row.x = parse_double(fields[2], line_no);
    row.y = parse_double(fields[3], line_no);
    row.w = parse_double(fields[4], line_no);
    row.h = parse_double(fields[5], line_no);
    row.conf = parse_double(fields[6], line_no);
    row.extra1 = parse_double(fields[7], line_no);
    row.extra2 = parse_double(fields[8], line_no);
    row.extra3 = parse_double(fields[9], line_no);
    if (row.frame < 1) {
      throw ValidationError("line " + std::to_string(line_no) + ": frame must be >= 1");
    }
    row.embedding.reserve(fields.size() - 10);
    for (size_t i = 10; i < fields.size(); ++i) {
      row.embedding.push_back(parse_double(fields[i], line_no));
    }
    by_frame[row.frame].push_back(std::move(row));
  }
  MotSequence out;
  out.reserve(by_frame.size());
  for (auto& [frame, rows] : by_frame) out.push_back(MotFrame{frame, std::move(rows)});
  return out;
}

MotSequence parse_mot_text(const std::string& text) {
  std::istringstream in(text);
  return parse_mot(in);
}

MotSequence load_mot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return parse_mot(in);
}

std::string write_mot(const MotSequence& frames) {
  std::vector<const MotFrame*> ordered;
  ordered.reserve(frames.size());
  for (const auto& f : frames) ordered.push_back(&f);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MotFrame* a, const MotFrame* b) { return a->frame < b->frame; });
  std::string out;
  for (const MotFrame* f : ordered) {
    for (const MotRow& r : f->rows) {
      out += std::to_string(r.frame);
      out += ',';
      out += std::to_string(r.id);
      for (double v : {r.x, r.y, r.w, r.h, r.conf, r.extra1, r.extra2, r.extra3}) {
        out += ',';
        out += format_double(v);
      }
      for (double v : r.embedding) {
        out += ',';
        out += format_double(v);
      }
      out += '\n';
    }
  }
  return out;
}

void save_mot_file(const MotSequence& frames, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << write_mot(frames);
  if (!out) throw IoError("write failed: " + path);
}

size_t total_rows(const MotSequence& frames) {
  size_t n = 0;
  for (const auto& f : frames) n += f.rows.size();
  return n;
}

}  // namespace dtrack
