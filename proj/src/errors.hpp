// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <stdexcept>
#include <string>

namespace dtrack {

/// Invalid input data or configuration (maps to exit code 1 at the CLI).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure: missing, unreadable or truncated file (exit code 2).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dtrack
