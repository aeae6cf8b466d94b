#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/geo.hpp"
#include "carbonshift/graph.hpp"

namespace carbonshift {

enum class RouteMethod {
  traceroute,
  inferred_endpoints,
  inferred_endpoints_pops,
  inferred_waypoints,
  inferred_waypoints_pops,
};

// Dataset "source" strings ("Inferred (waypoints), with PoPs" etc.).
const char* to_string(RouteMethod m);
RouteMethod route_method_from_string(const std::string& s);

struct RouteSegment {
  PolyLine geometry;
  FiberType type = FiberType::land;
};

// A physical route between two cloud regions: an ordered hop (router)
// sequence plus the fiber segments connecting consecutive hops.
// Traceroute-sourced routes carry hops only; their distance is the
// great-circle sum over consecutive hops.
struct PhysicalRoute {
  RegionKey src, dst;
  std::vector<std::string> hops;     // node ids, or "(lat, lon)" for imports
  std::vector<GeoPoint> hop_points;  // one per hop
  std::vector<RouteSegment> segments;
  double distance_km = 0.0;
  RouteMethod method = RouteMethod::inferred_endpoints;
};

std::string route_id(const PhysicalRoute& r);

// Same fiber walked the other way; distance unchanged.
PhysicalRoute reversed(const PhysicalRoute& r);

// Structural checks: hop/point parity, segment continuity (1 km slack),
// distance consistent with the segment sum (1e-6 relative).
void validate_route(const PhysicalRoute& r);

// One observed traceroute hop before cleaning.
struct RawHop {
  GeoPoint location;
  double geo_accuracy_km = 0.0;
  std::string iso_hint;
};

// Ground-truth city location per cloud region, loaded from the node file.
using RegionRegistry = std::map<RegionKey, GeoPoint>;
RegionRegistry load_region_registry(const std::string& nodes_csv);

// A cleaned candidate list came out empty, or never matched its endpoints.
class empty_route_error : public input_error {
 public:
  using input_error::input_error;
};
class route_rejected_error : public input_error {
 public:
  using input_error::input_error;
};

// Drops inaccurate hops, verifies the remaining endpoints against the
// registry cities, and collapses consecutive duplicates.
std::vector<GeoPoint> clean_waypoints(const Config& cfg, const std::vector<RawHop>& hops,
                                      const RegionKey& src, const RegionKey& dst,
                                      const RegionRegistry& registry);

struct RouteCandidate {
  PhysicalRoute route;
  long long popularity = 0;
};

// Detour filter, near-minimum band, then highest popularity; ties fall to
// smaller distance and lexicographic hop sequence.
PhysicalRoute select_route(const Config& cfg, const std::vector<RouteCandidate>& candidates,
                           const GeoPoint& src, const GeoPoint& dst);

// Shortest path between the tapped regions, optionally forced through the
// given waypoints (each snapped to its nearest graph node).
PhysicalRoute infer_route(const InfraGraph& g, const RegionKey& src, const RegionKey& dst,
                          const std::vector<GeoPoint>& waypoints, bool use_pops);

// Route carrying the cleaned traceroute hops themselves.
PhysicalRoute traceroute_route(const RegionKey& src, const RegionKey& dst,
                               const std::vector<GeoPoint>& points);

// Raw traceroute ingestion: candidate hop lists per region pair, in file
// order.  A non-increasing hop_index starts a new candidate.
struct WaypointCandidate {
  std::vector<RawHop> hops;
  long long popularity = 0;
};
using RegionPair = std::pair<RegionKey, RegionKey>;
std::map<RegionPair, std::vector<WaypointCandidate>> load_waypoints(const std::string& path);

// Route dataset rows; export∘import is the identity byte for byte.
std::string export_routes(const std::vector<PhysicalRoute>& routes);
std::vector<PhysicalRoute> parse_routes(const std::string& text, const std::string& origin);
std::vector<PhysicalRoute> import_routes(const std::string& path);
void save_routes(const std::vector<PhysicalRoute>& routes, const std::string& path);

}  // namespace carbonshift
