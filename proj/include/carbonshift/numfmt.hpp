#pragma once

#include <cstdint>
#include <string>

namespace carbonshift {

// Shortest decimal string that parses back to exactly the same double.
// All CSV/WKT output goes through this so that export -> import -> export
// is byte-identical.
std::string format_double(double v);

std::string format_int64(int64_t v);

// strtod with full-string validation; throws input_error on trailing junk.
double parse_double(const std::string& s);
int64_t parse_int64(const std::string& s);

}  // namespace carbonshift
