// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace dtrack {

/// One MOTChallenge text row: frame,id,x,y,w,h,conf,-1,-1,-1. Detection rows
/// use id = -1. Rows may carry extra trailing fields holding an appearance
/// embedding; plain 10-field rows have an empty embedding.
struct MotRow {
  int frame = 1;
  long long id = -1;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double conf = 1.0;
  double extra1 = -1.0;
  double extra2 = -1.0;
  double extra3 = -1.0;
  Embedding embedding;

  Box box() const { return Box{x, y, x + w, y + h}; }
};

MotRow make_mot_row(int frame, long long id, const Box& b, double conf);

/// Rows of one frame, in input order.
struct MotFrame {
  int frame = 1;
  std::vector<MotRow> rows;
};

/// Frames in ascending frame order.
using MotSequence = std::vector<MotFrame>;

MotSequence parse_mot(std::istream& in);
MotSequence parse_mot_text(const std::string& text);
MotSequence load_mot_file(const std::string& path);

std::string write_mot(const MotSequence& frames);
void save_mot_file(const MotSequence& frames, const std::string& path);

size_t total_rows(const MotSequence& frames);

}  // namespace dtrack
