#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carbonshift {

// Minimal RFC-4180 style CSV with two extensions used throughout:
//   * lines starting with '#' are comments (config echo headers) and skipped
//   * fields containing commas/quotes/newlines are double-quoted on output
struct CsvRow {
  std::vector<std::string> fields;
  size_t line_no = 0;  // 1-based line of the row start, for diagnostics
};

class CsvReader {
 public:
  // Reads the whole file; first non-comment row is returned too (callers
  // decide whether it is a header).
  static std::vector<CsvRow> read_file(const std::string& path);
  static std::vector<CsvRow> read_string(const std::string& text);
};

class CsvWriter {
 public:
  static std::string escape(const std::string& field);
  static std::string join(const std::vector<std::string>& fields);
};

// Throws input_error mentioning path and line when a row does not have
// exactly `expect` fields.
void require_fields(const CsvRow& row, size_t expect, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace carbonshift
