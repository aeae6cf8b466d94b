#include "carbonshift/csv.hpp"

#include <fstream>
#include <sstream>

#include "carbonshift/errors.hpp"

namespace carbonshift {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
  if (!out) throw input_error("write failed: " + path);
}

std::vector<CsvRow> CsvReader::read_string(const std::string& text) {
  std::vector<CsvRow> rows;
  size_t i = 0, n = text.size(), line = 1;
  while (i < n) {
    // Skip blank and comment lines.
    if (text[i] == '\n') { ++i; ++line; continue; }
    if (text[i] == '\r') { ++i; continue; }
    if (text[i] == '#') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    CsvRow row;
    row.line_no = line;
    std::string field;
    bool quoted = false;
    for (;;) {
      if (quoted) {
        if (i >= n) throw input_error("unterminated quoted CSV field at line " + std::to_string(row.line_no));
        char c = text[i];
        if (c == '"') {
          if (i + 1 < n && text[i + 1] == '"') { field += '"'; i += 2; }
          else { quoted = false; ++i; }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        continue;
      }
      if (i >= n || text[i] == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        row.fields.push_back(field);
        if (i < n) { ++i; ++line; }
        break;
      }
      char c = text[i];
      if (c == ',') { row.fields.push_back(field); field.clear(); ++i; }
      else if (c == '"' && field.empty()) { quoted = true; ++i; }
      else { field += c; ++i; }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> CsvReader::read_file(const std::string& path) {
  return read_string(read_text_file(path));
}

std::string CsvWriter::escape(const std::string& field) {
  bool need = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!need) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string CsvWriter::join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

void require_fields(const CsvRow& row, size_t expect, const std::string& path) {
  if (row.fields.size() != expect)
    throw input_error(path + ":" + std::to_string(row.line_no) + ": expected " +
                      std::to_string(expect) + " fields, got " +
                      std::to_string(row.fields.size()));
}

}  // namespace carbonshift
