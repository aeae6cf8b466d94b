#pragma once

#include <cstddef>
#include <vector>

namespace carbonshift {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, normalized to (-180, 180]

  bool operator==(const GeoPoint& o) const { return lat == o.lat && lon == o.lon; }
};

// Wraps into (-180, 180].
double normalize_lon(double lon);

void validate_point(const GeoPoint& p);

// Great-circle distance on a sphere of radius 6371 km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

struct PolyLine {
  std::vector<GeoPoint> points;  // >= 2 once constructed via make()
  double length_km = 0.0;        // sum of consecutive haversine distances

  static PolyLine make(std::vector<GeoPoint> pts);
  PolyLine reversed() const;
};

// Point at arc distance d (km) from the start, linearly interpolated in
// lat/lon within the containing segment. Requires 0 <= d <= length.
GeoPoint point_along(const PolyLine& line, double d_km);

// Closest point of a polyline to p (equirectangular projection per segment,
// which is the planar approximation appropriate at tapping scale).
struct NearestOnLine {
  GeoPoint point;
  double distance_km = 0.0;  // great-circle distance p -> point
  size_t segment = 0;        // index of containing segment
  double t = 0.0;            // interpolation parameter within segment [0,1]
  double along_km = 0.0;     // arc distance from line start to the point
};
NearestOnLine nearest_on_polyline(const PolyLine& line, const GeoPoint& p);

}  // namespace carbonshift
