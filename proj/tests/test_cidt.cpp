#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "carbonshift/carbon.hpp"
#include "carbonshift/cidt.hpp"
#include "carbonshift/config.hpp"
#include "carbonshift/csv.hpp"
#include "carbonshift/devices.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/step_series.hpp"

using namespace carbonshift;

namespace {

const int64_t kHour = 3600;

Device dev(const std::string& iso, double ie, double scale = 1.0, GeoPoint at = {}) {
  Device d;
  d.klass = DeviceClass::core_router;
  d.location = at;
  d.iso = iso;
  d.ie_w_per_gbps = ie;
  d.submarine_scale = scale;
  return d;
}

DeviceChain chain_of(std::vector<Device> devices) {
  DeviceChain c;
  c.route = "x:a->x:b";
  c.devices = std::move(devices);
  return c;
}

CieStore constant_store(const std::vector<std::pair<std::string, double>>& gkwh, int64_t t0,
                        int64_t t1) {
  CieStore st;
  for (const auto& [iso, v] : gkwh)
    st.add_segment(iso, StepSeries::constant(t0, t1, v / kJoulesPerKwh));
  return st;
}

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

std::vector<GeoPoint> rect(double lat0, double lat1, double lon0, double lon1) {
  return {{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}};
}

}  // namespace

TEST_CASE("one router at constant intensity gives the textbook value") {
  auto st = constant_store({{"A", 360.0}}, 0, 86400);
  Config cfg;
  auto c = cidt(chain_of({dev("A", 10.0)}), st, cfg, 0, kHour);
  REQUIRE(c.series.steps() == 1);
  CHECK(c.series.values()[0] == 0.001);  // 10 W/Gbps x 360 g/kWh, exact in binary
  CHECK(c.series.begin() == 0);
  CHECK(c.series.end() == kHour);
  CHECK(c.coverage_ratio == 1.0);
  CHECK(c.power_multiplier == 1.0);
  CHECK(c.route == "x:a->x:b");

  CHECK_THROWS_AS(cidt(chain_of({}), st, cfg, 0, kHour), input_error);
}

TEST_CASE("pue and redundancy are plain multipliers") {
  auto st = constant_store({{"A", 360.0}}, 0, 86400);
  Config cfg;
  cfg.set("cidt.pue", "2");
  cfg.set("cidt.redundancy", "4");
  auto c = cidt(chain_of({dev("A", 10.0)}), st, cfg, 0, kHour);
  CHECK(c.series.values()[0] == 0.008);  // x8 is exact scaling
  cfg.set("cidt.pue", "0");
  CHECK_THROWS_AS(cidt(chain_of({dev("A", 10.0)}), st, cfg, 0, kHour), input_error);
}

TEST_CASE("cidt matches a per-device summation oracle on random chains") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> cie(50.0, 500.0);
  std::uniform_real_distribution<double> ie(0.01, 10.0);
  std::uniform_real_distribution<double> sc(1.0, 3.0);
  const int64_t t1 = 6 * kHour;
  const std::vector<std::string> isos = {"A", "B", "C"};

  for (int trial = 0; trial < 10; ++trial) {
    CieStore st;
    std::map<std::string, StepSeries> raw;
    for (const auto& iso : isos) {
      std::vector<int64_t> bp;
      std::vector<double> val;
      for (int h = 0; h <= 6; ++h) bp.push_back(h * kHour);
      for (int h = 0; h < 6; ++h) val.push_back(cie(rng) / kJoulesPerKwh);
      raw[iso] = StepSeries(bp, val);
      st.add_segment(iso, raw[iso]);
    }
    std::vector<Device> ds;
    int n = 5 + int(rng() % 26);
    for (int i = 0; i < n; ++i) ds.push_back(dev(isos[rng() % 3], ie(rng), sc(rng)));
    auto chain = chain_of(ds);

    Config cfg;
    cfg.set("cidt.pue", "1.3");
    cfg.set("cidt.redundancy", "2");
    auto c = cidt(chain, st, cfg, 0, t1);

    for (int64_t t = 0; t < t1; t += 97) {
      double expect = 0.0;
      for (const auto& d : ds)
        expect += d.ie_w_per_gbps * d.submarine_scale * raw[d.iso].value_at(t);
      expect *= 1.3 * 2.0;
      double got = c.series.value_at(t);
      CHECK(got == doctest::Approx(expect).epsilon(1e-9));
      CHECK(got >= 0.0);
    }
  }
}

TEST_CASE("breakpoints are the union of the contributing series") {
  CieStore st;
  st.add_segment("A", StepSeries({0, 100, 200}, {1e-4, 2e-4}));
  st.add_segment("B", StepSeries({0, 50, 200}, {3e-4, 3e-4}));
  Config cfg;
  auto c = cidt(chain_of({dev("A", 1.0), dev("B", 1.0)}), st, cfg, 0, 200);
  CHECK(c.series.breakpoints() == std::vector<int64_t>{0, 50, 100, 200});
}

TEST_CASE("doubling every device intensity doubles the series bit for bit") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ie(0.01, 10.0);
  CieStore st;
  st.add_segment("A", StepSeries({0, 60, 120}, {1.1e-4, 0.7e-4}));
  st.add_segment("B", StepSeries({0, 40, 120}, {2.3e-4, 1.9e-4}));
  Config cfg;

  std::vector<Device> base;
  for (int i = 0; i < 17; ++i) base.push_back(dev(i % 2 ? "A" : "B", ie(rng)));
  std::vector<Device> twice = base;
  for (auto& d : twice) d.ie_w_per_gbps *= 2.0;

  auto c1 = cidt(chain_of(base), st, cfg, 0, 120);
  auto c2 = cidt(chain_of(twice), st, cfg, 0, 120);
  REQUIRE(c1.series.values().size() == c2.series.values().size());
  for (size_t i = 0; i < c1.series.values().size(); ++i)
    CHECK(c2.series.values()[i] == 2.0 * c1.series.values()[i]);
}

TEST_CASE("adding a device never lowers the series") {
  CieStore st;
  st.add_segment("A", StepSeries({0, 60, 120}, {1.1e-4, 0.7e-4}));
  st.add_segment("B", StepSeries({0, 40, 120}, {2.3e-4, 1.9e-4}));
  Config cfg;
  std::vector<Device> base = {dev("A", 3.0), dev("B", 1.5), dev("A", 0.25)};
  auto before = cidt(chain_of(base), st, cfg, 0, 120);
  base.push_back(dev("B", 1e-9));
  auto after = cidt(chain_of(base), st, cfg, 0, 120);
  REQUIRE(before.series.values().size() == after.series.values().size());
  for (size_t i = 0; i < before.series.values().size(); ++i)
    CHECK(after.series.values()[i] >= before.series.values()[i]);
}

TEST_CASE("reversing a chain with one zone changes nothing") {
  auto fwd = meridian_route(18.03, 10.0, FiberType::land);
  IsoMap isos({{"Z", rect(-1.0, 20.0, 9.0, 11.0), {}}});
  Config cfg;
  auto table = DevicePowerTable::builtin("y2012");
  auto a = expand(fwd, table, isos, cfg);
  auto b = expand(reversed(fwd), table, isos, cfg);

  auto st = constant_store({{"Z", 420.0}}, 0, 86400);
  auto ca = cidt(a, st, cfg, 0, 12 * kHour);
  auto cb = cidt(b, st, cfg, 0, 12 * kHour);
  CHECK(ca.series.breakpoints() == cb.series.breakpoints());
  CHECK(ca.series.values() == cb.series.values());
}

TEST_CASE("route cidt is direction independent across zones") {
  // Amplifier positions are anchored at one end, so the per-direction zone
  // multisets differ; canonical orientation makes both directions share one
  // chain and therefore one series.
  auto fwd = meridian_route(18.03, 10.0, FiberType::land);
  IsoMap isos({{"S", rect(-1.0, 9.0, 9.0, 11.0), {}}, {"N", rect(9.0, 20.0, 9.0, 11.0), {}}});
  auto st = constant_store({{"S", 100.0}, {"N", 300.0}}, 0, 86400);
  Config cfg;
  auto table = DevicePowerTable::builtin("y2012");

  auto there = route_cidt(fwd, table, isos, st, cfg, 0, 12 * kHour);
  auto back = route_cidt(reversed(fwd), table, isos, st, cfg, 0, 12 * kHour);
  CHECK(there.route == "aws:s->aws:d");
  CHECK(back.route == "aws:d->aws:s");
  CHECK(there.series.breakpoints() == back.series.breakpoints());
  CHECK(there.series.values() == back.series.values());
  CHECK(there.coverage_ratio == back.coverage_ratio);
  CHECK(there.power_multiplier == back.power_multiplier);
}

TEST_CASE("estimation metadata rides along and the cutoff propagates") {
  auto st = constant_store({{"A", 360.0}}, 0, 86400);
  auto partial = chain_of({dev("A", 1.0), dev("A", 1.0), dev("X", 1.0)});
  Config cfg;
  CHECK_THROWS_AS(cidt(partial, st, cfg, 0, kHour), below_cutoff_error);  // 2/3 < 0.75

  cfg.set("carbon.cutoff", "0.5");
  auto c = cidt(partial, st, cfg, 0, kHour);
  CHECK(c.power_multiplier == 1.5);
  CHECK(c.coverage_ratio == doctest::Approx(2.0 / 3.0));
  CHECK(c.policy == EstimationPolicy::route_average);
  CHECK(c.series.values()[0] ==
        doctest::Approx(2.0 * (360.0 / kJoulesPerKwh) * 1.5).epsilon(1e-12));
}

TEST_CASE("stats summarize per-route means and medians") {
  CidtSeries a{"r:a->r:b", StepSeries::constant(0, 100, 0.01), EstimationPolicy::route_average,
               1.0, 1.0};
  CidtSeries b{"r:a->r:c", StepSeries::constant(0, 100, 0.03), EstimationPolicy::route_average,
               1.0, 1.0};

  auto single = cidt_stats({a});
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].route == "r:a->r:b");
  CHECK(single.rows[0].mean_g_per_gb == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(single.p50 == single.rows[0].mean_g_per_gb);  // one sample: all percentiles equal it
  CHECK(single.p25 == single.p50);

  auto both = cidt_stats({a, b});
  CHECK(both.p50 == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(both.p25 == doctest::Approx(0.015).epsilon(1e-12));
  CHECK(both.p75 == doctest::Approx(0.025).epsilon(1e-12));

  CHECK_THROWS_AS(cidt_stats({}), input_error);
}

TEST_CASE("csv emission carries the echo header and every step") {
  CidtSeries a{"r:a->r:b", StepSeries({0, 60, 120}, {0.01, 0.02}),
               EstimationPolicy::route_average, 1.0, 1.0};
  Config cfg;

  std::string series_csv = cidt_series_csv({a}, cfg);
  CHECK(series_csv.find("# ") == 0);
  auto rows = CsvReader::read_string(series_csv);
  REQUIRE(rows.size() == 3);  // header + 2 steps
  CHECK(CsvWriter::join(rows[0].fields) == "route_id,t,cidt_g_per_gb");
  CHECK(rows[1].fields[0] == "r:a->r:b");
  CHECK(rows[1].fields[1] == "1970-01-01T00:00:00Z");
  CHECK(parse_double(rows[1].fields[2]) == 0.01);
  CHECK(parse_double(rows[2].fields[2]) == 0.02);

  std::string stats_csv = cidt_stats_csv(cidt_stats({a}), cfg);
  CHECK(stats_csv.find("# p50_mean_g_per_gb=") != std::string::npos);
  auto srows = CsvReader::read_string(stats_csv);
  REQUIRE(srows.size() == 2);
  CHECK(CsvWriter::join(srows[0].fields) == "route_id,mean,median");
  CHECK(srows[1].fields[0] == "r:a->r:b");
}
