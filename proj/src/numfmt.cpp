#include "carbonshift/numfmt.hpp"

#include <charconv>
#include <cstdlib>
#include <system_error>

#include "carbonshift/errors.hpp"

namespace carbonshift {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw internal_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string format_int64(int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s.empty()) throw input_error("empty numeric field");
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || errno == ERANGE)
    throw input_error("bad numeric value '" + s + "'");
  return v;
}

int64_t parse_int64(const std::string& s) {
  if (s.empty()) throw input_error("empty integer field");
  int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw input_error("bad integer value '" + s + "'");
  return v;
}

}  // namespace carbonshift
