#include "carbonshift/geo.hpp"

#include <cmath>

#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"

namespace carbonshift {

namespace {
constexpr double kDegToRad = M_PI / 180.0;

double wrap_delta_lon(double d) {
  double x = std::fmod(d, 360.0);
  if (x > 180.0) x -= 360.0;
  if (x <= -180.0) x += 360.0;
  return x;
}
}  // namespace

double normalize_lon(double lon) {
  double x = std::fmod(lon, 360.0);
  if (x > 180.0) x -= 360.0;
  if (x <= -180.0) x += 360.0;
  return x;
}

void validate_point(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0))
    throw input_error("latitude out of range: " + format_double(p.lat));
  if (!(p.lon >= -180.0 && p.lon <= 180.0))
    throw input_error("longitude out of range: " + format_double(p.lon));
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  double lat1 = a.lat * kDegToRad, lat2 = b.lat * kDegToRad;
  double dlat = (b.lat - a.lat) * kDegToRad;
  double dlon = (b.lon - a.lon) * kDegToRad;
  double sa = std::sin(dlat / 2), so = std::sin(dlon / 2);
  double h = sa * sa + std::cos(lat1) * std::cos(lat2) * so * so;
  if (h > 1.0) h = 1.0;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

PolyLine PolyLine::make(std::vector<GeoPoint> pts) {
  if (pts.size() < 2) throw input_error("polyline needs at least 2 points");
  for (const auto& p : pts) validate_point(p);
  PolyLine l;
  l.points = std::move(pts);
  double len = 0.0;
  for (size_t i = 1; i < l.points.size(); ++i)
    len += haversine_km(l.points[i - 1], l.points[i]);
  l.length_km = len;
  return l;
}

PolyLine PolyLine::reversed() const {
  PolyLine r;
  r.points.assign(points.rbegin(), points.rend());
  // Same chord multiset, so reuse the length instead of re-accumulating in
  // the opposite order (keeps reversal exactly length-preserving).
  r.length_km = length_km;
  return r;
}

GeoPoint point_along(const PolyLine& line, double d_km) {
  if (!(d_km >= 0.0 && d_km <= line.length_km * (1.0 + 1e-12) + 1e-12))
    throw input_error("point_along: distance " + format_double(d_km) +
                      " outside [0, " + format_double(line.length_km) + "]");
  double cum = 0.0;
  for (size_t i = 1; i < line.points.size(); ++i) {
    const GeoPoint& a = line.points[i - 1];
    const GeoPoint& b = line.points[i];
    double seg = haversine_km(a, b);
    if (cum + seg >= d_km && seg > 0.0) {
      double t = (d_km - cum) / seg;
      if (t > 1.0) t = 1.0;
      GeoPoint p;
      p.lat = a.lat + t * (b.lat - a.lat);
      p.lon = normalize_lon(a.lon + t * wrap_delta_lon(b.lon - a.lon));
      return p;
    }
    cum += seg;
  }
  return line.points.back();
}

NearestOnLine nearest_on_polyline(const PolyLine& line, const GeoPoint& p) {
  NearestOnLine best;
  bool have = false;
  double coslat = std::cos(p.lat * kDegToRad);
  double cum = 0.0;
  for (size_t i = 1; i < line.points.size(); ++i) {
    const GeoPoint& a = line.points[i - 1];
    const GeoPoint& b = line.points[i];
    double seg = haversine_km(a, b);
    // Equirectangular plane centered at p; adequate at tap distances.
    double ax = wrap_delta_lon(a.lon - p.lon) * coslat, ay = a.lat - p.lat;
    double bx = wrap_delta_lon(b.lon - p.lon) * coslat, by = b.lat - p.lat;
    double dx = bx - ax, dy = by - ay;
    double denom = dx * dx + dy * dy;
    double t = 0.0;
    if (denom > 0.0) {
      t = -(ax * dx + ay * dy) / denom;
      if (t < 0.0) t = 0.0;
      if (t > 1.0) t = 1.0;
    }
    GeoPoint cand;
    cand.lat = a.lat + t * (b.lat - a.lat);
    cand.lon = normalize_lon(a.lon + t * wrap_delta_lon(b.lon - a.lon));
    double d = haversine_km(p, cand);
    if (!have || d < best.distance_km) {
      have = true;
      best.point = cand;
      best.distance_km = d;
      best.segment = i - 1;
      best.t = t;
      best.along_km = cum + t * seg;
    }
    cum += seg;
  }
  if (!have) throw internal_error("nearest_on_polyline: empty polyline");
  return best;
}

}  // namespace carbonshift
