#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <utility>

#include "carbonshift/config.hpp"
#include "carbonshift/csv.hpp"
#include "carbonshift/devices.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"

using namespace carbonshift;

namespace {

// Route with one segment running north along a meridian from (0, lon).
PhysicalRoute meridian_route(double lat_span, double lon, FiberType type) {
  PhysicalRoute r;
  r.src = {"aws", "s"};
  r.dst = {"aws", "d"};
  r.method = RouteMethod::inferred_endpoints;
  r.hops = {"h0", "h1"};
  r.hop_points = {{0, lon}, {lat_span, lon}};
  RouteSegment seg;
  seg.type = type;
  seg.geometry = PolyLine::make({{0, lon}, {lat_span, lon}});
  r.segments.push_back(seg);
  r.distance_km = seg.geometry.length_km;
  return r;
}

PhysicalRoute reversed_route(const PhysicalRoute& r) { return reversed(r); }

std::vector<GeoPoint> rect(double lat0, double lat1, double lon0, double lon1) {
  return {{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}};
}

size_t count_class(const DeviceChain& c, DeviceClass k) {
  size_t n = 0;
  for (const auto& d : c.devices) n += d.klass == k;
  return n;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("builtin power tables carry the published intensities") {
  DevicePowerTable t12 = DevicePowerTable::builtin("y2012");
  CHECK(t12.ie(DeviceClass::core_router) == 10.0);
  CHECK(t12.ie(DeviceClass::oxc) == 0.05);
  CHECK(t12.ie(DeviceClass::transceiver) == 1.5);
  CHECK(t12.ie(DeviceClass::amplifier) == 0.03);
  CHECK(t12.ie(DeviceClass::regenerator) == 3.0);
  DevicePowerTable t24 = DevicePowerTable::builtin("y2024");
  CHECK(t24.ie(DeviceClass::core_router) == 2.0);
  CHECK(t24.ie(DeviceClass::transceiver) == 0.09);
  CHECK(t24.ie(DeviceClass::oxc) == 0.05);
  CHECK(t24.ie(DeviceClass::amplifier) == 0.03);
  CHECK(t24.ie(DeviceClass::regenerator) == 3.0);
  CHECK_THROWS_AS(DevicePowerTable::builtin("y1999"), input_error);
}

TEST_CASE("power table files overlay the builtin era values") {
  std::string path = tmp_path("cs_power.csv");
  write_text_file(path,
                  "class,era,ie_w_per_gbps\n"
                  "core_router,y2024,1.5\n"
                  "core_router,y2012,12\n");
  DevicePowerTable t = DevicePowerTable::load(path, "y2024");
  CHECK(t.ie(DeviceClass::core_router) == 1.5);   // overridden
  CHECK(t.ie(DeviceClass::transceiver) == 0.09);  // builtin kept
  DevicePowerTable t12 = DevicePowerTable::load(path, "y2012");
  CHECK(t12.ie(DeviceClass::core_router) == 12.0);

  write_text_file(path, "class,era,ie_w_per_gbps\nblaster,y2012,1\n");
  CHECK_THROWS_AS(DevicePowerTable::load(path, "y2012"), input_error);
  write_text_file(path, "class,era,ie_w_per_gbps\ncore_router,y2012,0\n");
  CHECK_THROWS_AS(DevicePowerTable::load(path, "y2012"), input_error);
  std::filesystem::remove(path);
}

TEST_CASE("ray casting handles convex and concave rings") {
  auto square = rect(0, 10, 0, 10);
  CHECK(point_in_ring({5, 5}, square));
  CHECK_FALSE(point_in_ring({5, 15}, square));
  CHECK_FALSE(point_in_ring({-1, 5}, square));
  // U-shape: notch cut from the top between lon 4..6 down to lat 4.
  std::vector<GeoPoint> u{{0, 0}, {0, 10}, {10, 10}, {10, 6}, {4, 6}, {4, 4}, {10, 4}, {10, 0}};
  CHECK(point_in_ring({2, 5}, u));        // below the notch
  CHECK_FALSE(point_in_ring({8, 5}, u));  // inside the notch
  CHECK(point_in_ring({8, 1}, u));        // left arm
  CHECK(point_in_ring({8, 9}, u));        // right arm
}

TEST_CASE("iso lookup: containment, centroid fallback, unknown") {
  IsoMap isos({{"EAST", rect(35, 45, -80, -70), {}}, {"WEST", rect(35, 45, -92, -80), {}}});
  CHECK(isos.locate({40, -75}, 1000) == "EAST");
  CHECK(isos.locate({40, -85}, 1000) == "WEST");
  // Off the map: fallback to the nearest centroid within the radius.
  CHECK(isos.locate({46, -75}, 1000) == "EAST");
  CHECK(isos.locate({46, -75}, 10) == "");
  CHECK(isos.locate({-40, 100}, 1000) == "");
  CHECK_THROWS_AS(IsoMap({{"X", {{0, 0}, {1, 1}}, {}}}), input_error);
}

TEST_CASE("iso zone files load polygon rings") {
  std::string path = tmp_path("cs_isos.csv");
  write_text_file(path,
                  "iso_id,wkt_polygon\n"
                  "Z1,\"POLYGON ((0 0, 10 0, 10 10, 0 10, 0 0))\"\n"
                  "Z2,\"LINESTRING (20 0, 30 0, 30 10, 20 10, 20 0)\"\n");
  IsoMap isos = IsoMap::load(path);
  std::filesystem::remove(path);
  REQUIRE(isos.zones().size() == 2);
  CHECK(isos.locate({5, 5}, 0) == "Z1");
  CHECK(isos.locate({5, 25}, 0) == "Z2");
}

TEST_CASE("submarine scaling law") {
  Config cfg;
  CHECK(submarine_scaling(0, 2000, cfg) == 1.0);
  CHECK(submarine_scaling(1000, 2000, cfg) == 2.0);
  CHECK(submarine_scaling(250, 2000, cfg) == 1.25);
  cfg.set("devices.kappa", "0");
  CHECK(submarine_scaling(700, 2000, cfg) == 1.0);
  cfg.set("devices.kappa", "2");
  CHECK(submarine_scaling(500, 2000, cfg) == 2.0);
  CHECK_THROWS_AS(submarine_scaling(1200, 2000, cfg), internal_error);
  CHECK_THROWS_AS(submarine_scaling(-1, 2000, cfg), internal_error);
}

TEST_CASE("expansion counts devices by the spacing rules") {
  Config cfg;
  DevicePowerTable t = DevicePowerTable::builtin("y2012");
  IsoMap isos;

  SUBCASE("100 km land segment") {
    PhysicalRoute r = meridian_route(0.9, 0, FiberType::land);  // ~100.1 km
    REQUIRE(r.distance_km > 100);
    REQUIRE(r.distance_km < 105);
    DeviceChain c = expand(r, t, isos, cfg);
    CHECK(count_class(c, DeviceClass::core_router) == 2);
    CHECK(count_class(c, DeviceClass::transceiver) == 2);
    CHECK(count_class(c, DeviceClass::oxc) == 2);
    CHECK(count_class(c, DeviceClass::amplifier) == 1);
    CHECK(count_class(c, DeviceClass::regenerator) == 0);
    CHECK(c.devices.size() == 7);
    CHECK(c.route == "aws:s->aws:d");
    CHECK(c.devices.front().klass == DeviceClass::core_router);
    for (const auto& d : c.devices) {
      CHECK(d.submarine_scale == 1.0);
      CHECK(d.ie_w_per_gbps == t.ie(d.klass));
    }
  }
  SUBCASE("2000 km land segment") {
    PhysicalRoute r = meridian_route(18.03, 0, FiberType::land);  // ~2004 km
    REQUIRE(r.distance_km > 2000);
    REQUIRE(r.distance_km < 2080);
    DeviceChain c = expand(r, t, isos, cfg);
    CHECK(count_class(c, DeviceClass::amplifier) == 25);
    CHECK(count_class(c, DeviceClass::regenerator) == 1);
    // Interior devices come out in along-track order.
    double prev = -1;
    for (const auto& d : c.devices)
      if (d.klass == DeviceClass::amplifier || d.klass == DeviceClass::regenerator) {
        CHECK(d.location.lat > prev);
        prev = d.location.lat;
      }
  }
  SUBCASE("2000 km submarine segment has no regenerators") {
    PhysicalRoute r = meridian_route(18.03, 0, FiberType::submarine);
    DeviceChain c = expand(r, t, isos, cfg);
    CHECK(count_class(c, DeviceClass::amplifier) == 25);
    CHECK(count_class(c, DeviceClass::regenerator) == 0);
  }
  SUBCASE("short segment keeps endpoint devices only") {
    PhysicalRoute r = meridian_route(0.1, 0, FiberType::land);  // ~11 km
    DeviceChain c = expand(r, t, isos, cfg);
    CHECK(c.devices.size() == 6);
    CHECK(count_class(c, DeviceClass::amplifier) == 0);
  }
  SUBCASE("traceroute routes expand to routers only") {
    PhysicalRoute r;
    r.src = {"aws", "s"};
    r.dst = {"aws", "d"};
    r.method = RouteMethod::traceroute;
    r.hops = {"(0, 0)", "(1, 1)"};
    r.hop_points = {{0, 0}, {1, 1}};
    DeviceChain c = expand(r, t, isos, cfg);
    CHECK(c.devices.size() == 2);
    CHECK(count_class(c, DeviceClass::core_router) == 2);
  }
}

TEST_CASE("submarine amplifiers draw from the nearer landing") {
  Config cfg;
  DevicePowerTable t = DevicePowerTable::builtin("y2012");
  // Cable from (0,-70) in EAST-like zone A to (18.03,-70) in zone B.
  IsoMap isos({{"A", rect(-5, 5, -75, -65), {}}, {"B", rect(13, 23, -75, -65), {}}});
  PhysicalRoute r = meridian_route(18.03, -70, FiberType::submarine);
  double len = r.distance_km;
  DeviceChain c = expand(r, t, isos, cfg);

  std::vector<const Device*> amps;
  for (const auto& d : c.devices)
    if (d.klass == DeviceClass::amplifier) amps.push_back(&d);
  REQUIRE(amps.size() == 25);
  for (size_t i = 0; i < amps.size(); ++i) {
    double along = (i + 1) * 80.0;
    double d_near = std::min(along, len - along);
    CHECK(amps[i]->iso == (along <= len - along ? "A" : "B"));
    CHECK(amps[i]->submarine_scale == doctest::Approx(1.0 + d_near / (len / 2)).epsilon(1e-12));
    CHECK(amps[i]->submarine_scale >= 1.0);
    CHECK(amps[i]->submarine_scale <= 2.0);
  }
  // 100 km from end A on a ~2000 km cable: unambiguously A's side.
  CHECK(amps[0]->iso == "A");
  CHECK(amps[24]->iso == "B");
}

TEST_CASE("reversal keeps the device population identical") {
  Config cfg;
  DevicePowerTable t = DevicePowerTable::builtin("y2012");
  IsoMap isos;
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> span(0.5, 20.0);
  for (int trial = 0; trial < 8; ++trial) {
    FiberType type = trial % 2 ? FiberType::land : FiberType::submarine;
    PhysicalRoute fwd = meridian_route(span(rng), 10, type);
    DeviceChain a = expand(fwd, t, isos, cfg);
    DeviceChain b = expand(reversed_route(fwd), t, isos, cfg);
    REQUIRE(a.devices.size() == b.devices.size());
    auto key = [](const Device& d) { return std::pair(d.ie_w_per_gbps, d.submarine_scale); };
    std::vector<std::pair<double, double>> ka, kb;
    for (const auto& d : a.devices) ka.push_back(key(d));
    for (const auto& d : b.devices) kb.push_back(key(d));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    CHECK(ka == kb);  // bitwise: same intensities, same scale multiset
  }
}

TEST_CASE("wider amplifier spacing never adds amplifiers") {
  Config cfg;
  DevicePowerTable t = DevicePowerTable::builtin("y2012");
  IsoMap isos;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> span(0.5, 25.0);
  for (int trial = 0; trial < 6; ++trial) {
    PhysicalRoute r = meridian_route(span(rng), 0, FiberType::land);
    size_t prev = SIZE_MAX;
    for (double s : {40.0, 80.0, 120.0, 200.0, 500.0}) {
      Config c2;
      c2.set("devices.amp_spacing_km", format_double(s));
      size_t n = count_class(expand(r, t, isos, c2), DeviceClass::amplifier);
      CHECK(n <= prev);
      prev = n;
    }
  }
}
