#include "carbonshift/devices.hpp"

#include <algorithm>
#include <cmath>

#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/wkt.hpp"

namespace carbonshift {

const char* to_string(DeviceClass c) {
  switch (c) {
    case DeviceClass::core_router: return "core_router";
    case DeviceClass::oxc: return "oxc";
    case DeviceClass::transceiver: return "transceiver";
    case DeviceClass::amplifier: return "amplifier";
    case DeviceClass::regenerator: return "regenerator";
  }
  throw internal_error("bad device class");
}

DeviceClass device_class_from_string(const std::string& s) {
  if (s == "core_router") return DeviceClass::core_router;
  if (s == "oxc") return DeviceClass::oxc;
  if (s == "transceiver") return DeviceClass::transceiver;
  if (s == "amplifier") return DeviceClass::amplifier;
  if (s == "regenerator") return DeviceClass::regenerator;
  throw input_error("unknown device class '" + s + "'");
}

DevicePowerTable DevicePowerTable::builtin(const std::string& era) {
  DevicePowerTable t;
  t.era = era;
  if (era == "y2012") {
    t.ie_w_per_gbps = {{DeviceClass::core_router, 10.0},
                       {DeviceClass::oxc, 0.05},
                       {DeviceClass::transceiver, 1.5},
                       {DeviceClass::amplifier, 0.03},
                       {DeviceClass::regenerator, 3.0}};
  } else if (era == "y2024") {
    t.ie_w_per_gbps = {{DeviceClass::core_router, 2.0},
                       {DeviceClass::oxc, 0.05},
                       {DeviceClass::transceiver, 0.09},
                       {DeviceClass::amplifier, 0.03},
                       {DeviceClass::regenerator, 3.0}};
  } else {
    throw input_error("unknown device era '" + era + "'");
  }
  return t;
}

DevicePowerTable DevicePowerTable::load(const std::string& path, const std::string& era) {
  DevicePowerTable t = builtin(era);
  auto rows = CsvReader::read_file(path);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != "class,era,ie_w_per_gbps")
    throw input_error(path + ": expected header class,era,ie_w_per_gbps");
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_fields(r, 3, path);
    if (r.fields[1] != era) continue;
    double ie = parse_double(r.fields[2]);
    if (!(ie > 0))
      throw input_error(path + ":" + std::to_string(r.line_no) + ": intensity must be > 0");
    t.ie_w_per_gbps[device_class_from_string(r.fields[0])] = ie;
  }
  return t;
}

double DevicePowerTable::ie(DeviceClass c) const {
  auto it = ie_w_per_gbps.find(c);
  if (it == ie_w_per_gbps.end())
    throw input_error(std::string("power table lacks class ") + to_string(c));
  return it->second;
}

bool point_in_ring(const GeoPoint& p, const std::vector<GeoPoint>& ring) {
  bool inside = false;
  size_t n = ring.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    double xi = ring[i].lon, yi = ring[i].lat;
    double xj = ring[j].lon, yj = ring[j].lat;
    if ((yi > p.lat) != (yj > p.lat) &&
        p.lon < (xj - xi) * (p.lat - yi) / (yj - yi) + xi)
      inside = !inside;
  }
  return inside;
}

IsoMap::IsoMap(std::vector<Zone> zones) : zones_(std::move(zones)) {
  for (Zone& z : zones_) {
    if (z.id.empty()) throw input_error("iso zone without id");
    if (z.ring.size() < 3) throw input_error("iso zone '" + z.id + "' ring too small");
    double lat = 0, lon = 0;
    for (const GeoPoint& p : z.ring) {
      lat += p.lat;
      lon += p.lon;
    }
    z.centroid = {lat / double(z.ring.size()), lon / double(z.ring.size())};
  }
}

IsoMap IsoMap::load(const std::string& path) {
  auto rows = CsvReader::read_file(path);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != "iso_id,wkt_polygon")
    throw input_error(path + ": expected header iso_id,wkt_polygon");
  std::vector<Zone> zones;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_fields(r, 2, path);
    Zone z;
    z.id = r.fields[0];
    z.ring = parse_wkt_polygon_ring(r.fields[1]);
    zones.push_back(std::move(z));
  }
  return IsoMap(std::move(zones));
}

std::string IsoMap::locate(const GeoPoint& p, double fallback_radius_km) const {
  for (const Zone& z : zones_)
    if (point_in_ring(p, z.ring)) return z.id;
  const Zone* best = nullptr;
  double best_d = fallback_radius_km;
  for (const Zone& z : zones_) {
    double d = haversine_km(p, z.centroid);
    if (d <= best_d && (!best || d < best_d)) {
      best = &z;
      best_d = d;
    }
  }
  return best ? best->id : std::string();
}

double submarine_scaling(double d_to_nearest_end_km, double cable_length_km, const Config& cfg) {
  double half = cable_length_km / 2.0;
  if (d_to_nearest_end_km < 0 || d_to_nearest_end_km > half)
    throw internal_error("submarine distance outside [0, L/2]");
  double kappa = cfg.get_double("devices.kappa");
  return 1.0 + kappa * (d_to_nearest_end_km / half);
}

DeviceChain expand(const PhysicalRoute& route, const DevicePowerTable& powers, const IsoMap& isos,
                   const Config& cfg) {
  double amp_spacing = cfg.get_double("devices.amp_spacing_km");
  double regen_spacing = cfg.get_double("devices.regen_spacing_km");
  double fallback = cfg.get_double("iso.fallback_radius_km");
  if (!(amp_spacing > 0) || !(regen_spacing > 0))
    throw input_error("device spacings must be > 0");

  DeviceChain chain;
  chain.route = route_id(route);
  auto add = [&](DeviceClass klass, const GeoPoint& at, const std::string& iso, double scale) {
    Device d;
    d.klass = klass;
    d.location = at;
    d.iso = iso;
    d.ie_w_per_gbps = powers.ie(klass);
    d.submarine_scale = scale;
    chain.devices.push_back(std::move(d));
  };
  auto land_iso = [&](const GeoPoint& at) { return isos.locate(at, fallback); };

  for (size_t h = 0; h < route.hops.size(); ++h) {
    const GeoPoint& hop = route.hop_points[h];
    add(DeviceClass::core_router, hop, land_iso(hop), 1.0);
    if (h >= route.segments.size()) continue;

    const RouteSegment& seg = route.segments[h];
    const PolyLine& geom = seg.geometry;
    double len = geom.length_km;
    const GeoPoint& head = geom.points.front();
    const GeoPoint& tail = geom.points.back();
    add(DeviceClass::transceiver, head, land_iso(head), 1.0);
    add(DeviceClass::oxc, head, land_iso(head), 1.0);

    // Interior placements at every whole spacing, regenerators on land only.
    struct Placement {
      double along;
      DeviceClass klass;
    };
    std::vector<Placement> interior;
    for (int k = 1; k * amp_spacing <= len; ++k)
      interior.push_back({k * amp_spacing, DeviceClass::amplifier});
    if (seg.type == FiberType::land)
      for (int k = 1; k * regen_spacing <= len; ++k)
        interior.push_back({k * regen_spacing, DeviceClass::regenerator});
    std::stable_sort(interior.begin(), interior.end(),
                     [](const Placement& a, const Placement& b) { return a.along < b.along; });
    for (const Placement& pl : interior) {
      GeoPoint at = point_along(geom, pl.along);
      if (seg.type == FiberType::submarine) {
        // Undersea repeaters draw from the nearer landing.
        double d_near = std::min(pl.along, len - pl.along);
        const GeoPoint& landing = pl.along <= len - pl.along ? head : tail;
        add(pl.klass, at, land_iso(landing), submarine_scaling(d_near, len, cfg));
      } else {
        add(pl.klass, at, land_iso(at), 1.0);
      }
    }

    add(DeviceClass::transceiver, tail, land_iso(tail), 1.0);
    add(DeviceClass::oxc, tail, land_iso(tail), 1.0);
  }
  return chain;
}

}  // namespace carbonshift
