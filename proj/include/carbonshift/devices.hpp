#pragma once

#include <map>
#include <string>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/geo.hpp"
#include "carbonshift/routes.hpp"

namespace carbonshift {

enum class DeviceClass { core_router, oxc, transceiver, amplifier, regenerator };

const char* to_string(DeviceClass c);
DeviceClass device_class_from_string(const std::string& s);

// Per-capacity energy intensity (W/Gbps) per device class for one era.
struct DevicePowerTable {
  std::string era;
  std::map<DeviceClass, double> ie_w_per_gbps;

  static DevicePowerTable builtin(const std::string& era);
  // Builtin values overlaid with rows of the given era from a
  // `class,era,ie_w_per_gbps` file.
  static DevicePowerTable load(const std::string& path, const std::string& era);
  double ie(DeviceClass c) const;
};

struct Device {
  DeviceClass klass = DeviceClass::core_router;
  GeoPoint location;
  std::string iso;  // empty while unresolved
  double ie_w_per_gbps = 0.0;
  double submarine_scale = 1.0;  // 1 for land devices
};

struct DeviceChain {
  std::string route;
  std::vector<Device> devices;
};

// Grid operator zones as polygon rings on the lat/lon plane.
class IsoMap {
 public:
  struct Zone {
    std::string id;
    std::vector<GeoPoint> ring;  // open ring, ≥3 points
    GeoPoint centroid;           // vertex average, fallback anchor
  };

  IsoMap() = default;
  explicit IsoMap(std::vector<Zone> zones);
  static IsoMap load(const std::string& path);

  // Containment first (file order), then nearest centroid within the
  // fallback radius, otherwise "".
  std::string locate(const GeoPoint& p, double fallback_radius_km) const;
  const std::vector<Zone>& zones() const { return zones_; }

 private:
  std::vector<Zone> zones_;
};

// Even-odd ray cast with lon as x and lat as y.
bool point_in_ring(const GeoPoint& p, const std::vector<GeoPoint>& ring);

// 1 + kappa * d/(L/2): amplifiers cost more the further they sit from the
// shore that powers them.
double submarine_scaling(double d_to_nearest_end_km, double cable_length_km, const Config& cfg);

// One router per hop; per segment a transceiver and an OXC at each end,
// amplifiers every amp spacing, regenerators every regen spacing on land.
DeviceChain expand(const PhysicalRoute& route, const DevicePowerTable& powers, const IsoMap& isos,
                   const Config& cfg);

}  // namespace carbonshift
