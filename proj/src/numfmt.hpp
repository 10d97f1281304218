// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <string>
#include <string_view>

namespace dtrack {

// Shortest decimal form that parses back to the same double ('.' separator,
// locale independent). Every text writer in the project goes through this so
// that parse/write round-trips are value identity.
std::string format_double(double value);

// Shortest round-trip form of the float32 nearest to `value`. Used by the
// augmented text format, which stores at 4-byte precision.
std::string format_float32(double value);

// Strict parse of a full token; throws ValidationError on garbage.
double parse_double(std::string_view token, int line_no);
long long parse_int(std::string_view token, int line_no);

}  // namespace dtrack
