#pragma once

#include <string>
#include <vector>

#include "carbonshift/geo.hpp"

namespace carbonshift {

// Accepts LINESTRING and MULTILINESTRING, ASCII, no Z/M. Text order is
// (lon lat); internal order is (lat, lon).
std::vector<PolyLine> parse_wkt_lines(const std::string& text);

// Accepts POLYGON (outer ring only) or a closed LINESTRING; returns the ring
// without the closing duplicate point.
std::vector<GeoPoint> parse_wkt_polygon_ring(const std::string& text);

// Canonical form: always MULTILINESTRING, shortest round-trip decimals.
std::string serialize_multilinestring(const std::vector<PolyLine>& lines);

}  // namespace carbonshift
