#include "carbonshift/wkt.hpp"

#include <cctype>
#include <cstdlib>

#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"

namespace carbonshift {

namespace {

class WktParser {
 public:
  explicit WktParser(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) {
    throw input_error("WKT syntax error at byte " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string keyword() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected keyword");
    std::string kw = text_.substr(start, pos_ - start);
    for (char& c : kw) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return kw;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  double number() {
    skip_ws();
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected number");
    pos_ += static_cast<size_t>(end - begin);
    return v;
  }

  GeoPoint coord() {
    double lon = number();
    double lat = number();
    if (!(lat >= -90.0 && lat <= 90.0))
      throw input_error("WKT latitude out of range at byte " + std::to_string(pos_) +
                        ": " + format_double(lat));
    if (!(lon >= -180.0 && lon <= 180.0))
      throw input_error("WKT longitude out of range at byte " + std::to_string(pos_) +
                        ": " + format_double(lon));
    GeoPoint p;
    p.lat = lat;
    p.lon = normalize_lon(lon);
    return p;
  }

  std::vector<GeoPoint> point_list() {
    expect('(');
    std::vector<GeoPoint> pts;
    pts.push_back(coord());
    while (accept(',')) pts.push_back(coord());
    expect(')');
    return pts;
  }

  void end() {
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<PolyLine> parse_wkt_lines(const std::string& text) {
  WktParser p(text);
  std::string kw = p.keyword();
  std::vector<PolyLine> out;
  if (kw == "LINESTRING") {
    out.push_back(PolyLine::make(p.point_list()));
  } else if (kw == "MULTILINESTRING") {
    p.expect('(');
    out.push_back(PolyLine::make(p.point_list()));
    while (p.accept(',')) out.push_back(PolyLine::make(p.point_list()));
    p.expect(')');
  } else {
    throw input_error("WKT: unsupported geometry '" + kw + "'");
  }
  p.end();
  return out;
}

std::vector<GeoPoint> parse_wkt_polygon_ring(const std::string& text) {
  WktParser p(text);
  std::string kw = p.keyword();
  std::vector<GeoPoint> ring;
  if (kw == "POLYGON") {
    p.expect('(');
    ring = p.point_list();  // outer ring; holes unsupported
    p.expect(')');
  } else if (kw == "LINESTRING") {
    ring = p.point_list();
  } else {
    throw input_error("WKT: expected POLYGON or closed LINESTRING, got '" + kw + "'");
  }
  p.end();
  if (ring.size() < 4 || !(ring.front() == ring.back()))
    throw input_error("WKT polygon ring must be closed with at least 3 distinct points");
  ring.pop_back();
  return ring;
}

std::string serialize_multilinestring(const std::vector<PolyLine>& lines) {
  if (lines.empty()) throw input_error("cannot serialize empty geometry");
  std::string out = "MULTILINESTRING (";
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i) out += ", ";
    out += '(';
    const auto& pts = lines[i].points;
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j) out += ", ";
      out += format_double(pts[j].lon);
      out += ' ';
      out += format_double(pts[j].lat);
    }
    out += ')';
  }
  out += ')';
  return out;
}

}  // namespace carbonshift
