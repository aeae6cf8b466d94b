#include <doctest.h>

#include <cmath>
#include <random>

#include "carbonshift/errors.hpp"
#include "carbonshift/geo.hpp"

using namespace carbonshift;

namespace {

// Independent check: spherical law of cosines (different formula family
// than the haversine under test).
double law_of_cosines_km(const GeoPoint& a, const GeoPoint& b) {
  double d2r = M_PI / 180.0;
  double c = std::sin(a.lat * d2r) * std::sin(b.lat * d2r) +
             std::cos(a.lat * d2r) * std::cos(b.lat * d2r) *
                 std::cos((b.lon - a.lon) * d2r);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return 6371.0 * std::acos(c);
}

GeoPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lat(-85.0, 85.0), lon(-180.0, 180.0);
  return GeoPoint{lat(rng), normalize_lon(lon(rng))};
}

}  // namespace

TEST_CASE("haversine quarter meridian") {
  // 90 degrees of arc = pi*R/2.
  double d = haversine_km({0.0, 0.0}, {0.0, 90.0});
  CHECK(d == doctest::Approx(10007.54).epsilon(1e-6));
  CHECK(std::abs(d - M_PI * 6371.0 / 2.0) < 1e-9);
}

TEST_CASE("haversine zero distance and symmetry") {
  GeoPoint p{39.0469, -77.4903}, q{51.5074, -0.1278};
  CHECK(haversine_km(p, p) == 0.0);
  CHECK(haversine_km(p, q) == haversine_km(q, p));  // exact by formula symmetry
}

TEST_CASE("haversine agrees with independent formula") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    GeoPoint a = random_point(rng), b = random_point(rng);
    double h = haversine_km(a, b);
    double c = law_of_cosines_km(a, b);
    // law-of-cosines is ill-conditioned for near-zero distances
    if (h > 1.0) CHECK(std::abs(h - c) / h < 1e-6);
  }
}

TEST_CASE("haversine triangle inequality") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    GeoPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    double ab = haversine_km(a, b), bc = haversine_km(b, c), ac = haversine_km(a, c);
    CHECK(ac <= ab + bc + 1e-9 * (ab + bc + 1.0));
  }
}

TEST_CASE("haversine antimeridian wrap") {
  // 2 degrees apart across the dateline.
  double d = haversine_km({0.0, 179.0}, {0.0, -179.0});
  double ref = haversine_km({0.0, 0.0}, {0.0, 2.0});
  CHECK(d == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("normalize_lon wraps into (-180, 180]") {
  CHECK(normalize_lon(190.0) == -170.0);
  CHECK(normalize_lon(-190.0) == 170.0);
  CHECK(normalize_lon(540.0) == 180.0);
  CHECK(normalize_lon(180.0) == 180.0);
  CHECK(normalize_lon(-180.0) == 180.0);
  CHECK(normalize_lon(0.0) == 0.0);
}

TEST_CASE("polyline length and midpoint on equator") {
  PolyLine line = PolyLine::make({{0.0, 0.0}, {0.0, 10.0}});
  GeoPoint mid = point_along(line, line.length_km / 2.0);
  CHECK(std::abs(mid.lat - 0.0) < 1e-6);
  CHECK(std::abs(mid.lon - 5.0) < 1e-6);
  CHECK(point_along(line, 0.0) == line.points.front());
  GeoPoint last = point_along(line, line.length_km);
  CHECK(std::abs(last.lon - 10.0) < 1e-9);
}

TEST_CASE("point_along rejects out-of-range distances") {
  PolyLine line = PolyLine::make({{0.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(point_along(line, -1.0), input_error);
  CHECK_THROWS_AS(point_along(line, line.length_km + 1.0), input_error);
}

TEST_CASE("point_along consistency with accumulated segments") {
  PolyLine line = PolyLine::make({{10.0, 10.0}, {11.0, 11.0}, {12.5, 11.5}, {13.0, 13.0}});
  // Walking to the exact end of segment k lands on vertex k+1.
  double cum = 0.0;
  for (size_t i = 1; i < line.points.size(); ++i) {
    cum += haversine_km(line.points[i - 1], line.points[i]);
    GeoPoint p = point_along(line, cum);
    CHECK(std::abs(p.lat - line.points[i].lat) < 1e-9);
    CHECK(std::abs(p.lon - line.points[i].lon) < 1e-9);
  }
  CHECK(cum == doctest::Approx(line.length_km).epsilon(1e-12));
}

TEST_CASE("polyline reversal preserves length exactly") {
  PolyLine line = PolyLine::make({{10.0, 10.0}, {11.0, 11.0}, {12.5, 11.5}, {13.0, 13.0}});
  CHECK(line.reversed().length_km == line.length_km);
}

TEST_CASE("nearest point on a straight edge") {
  // Edge along the equator; probe 0.5 degrees north of its midpoint.
  PolyLine line = PolyLine::make({{0.0, 0.0}, {0.0, 2.0}});
  GeoPoint p{0.5, 1.0};
  NearestOnLine n = nearest_on_polyline(line, p);
  CHECK(std::abs(n.point.lat) < 1e-9);
  CHECK(n.point.lon == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(n.distance_km == doctest::Approx(haversine_km({0.0, 1.0}, p)).epsilon(1e-6));
  CHECK(n.along_km == doctest::Approx(line.length_km / 2.0).epsilon(1e-6));
}

TEST_CASE("nearest point clamps to vertices") {
  PolyLine line = PolyLine::make({{0.0, 0.0}, {0.0, 1.0}});
  NearestOnLine n = nearest_on_polyline(line, {1.0, -2.0});
  CHECK(n.t == 0.0);
  CHECK(n.point == line.points.front());
}
