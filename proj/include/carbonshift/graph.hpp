#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/geo.hpp"

namespace carbonshift {

enum class NodeKind { peering_city, pop, region, fiber_junction };
enum class FiberType { land, submarine };

const char* to_string(NodeKind k);
const char* to_string(FiberType t);
NodeKind node_kind_from_string(const std::string& s);
FiberType fiber_type_from_string(const std::string& s);

struct InfraNode {
  std::string id;
  NodeKind kind = NodeKind::peering_city;
  std::string cloud;      // for pop/region nodes
  std::string region_id;  // for region nodes
  GeoPoint location;
};

struct InfraEdge {
  std::string id;
  std::string a, b;  // node ids
  FiberType type = FiberType::land;
  PolyLine geometry;  // endpoint coordinates coincide with node locations
};

struct RegionKey {
  std::string cloud;
  std::string region;
  bool operator<(const RegionKey& o) const {
    return cloud != o.cloud ? cloud < o.cloud : region < o.region;
  }
  bool operator==(const RegionKey& o) const = default;
  std::string str() const { return cloud + ":" + region; }
};

// Fiber-map graph. Regions and PoPs are attached by tapping: the node is
// connected to the nearest point of the nearest edge via a synthetic land
// connector, splitting that edge at a new junction.
class InfraGraph {
 public:
  const InfraNode& node(const std::string& id) const;
  bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
  const std::map<std::string, InfraNode>& nodes() const { return nodes_; }
  const std::map<std::string, InfraEdge>& edges() const { return edges_; }
  const std::vector<std::string>& edges_at(const std::string& node_id) const;

  void add_node(InfraNode n);
  void add_edge(InfraEdge e);  // validates endpoints and geometry continuity

  // Attaches a node at p. If p coincides with an existing node, the new id
  // becomes an alias of it; if it projects onto an edge endpoint, only a
  // connector is added; otherwise the edge is split at the projection.
  void tap_location(const std::string& id, NodeKind kind, const std::string& cloud,
                    const std::string& region_id, const GeoPoint& p);

  // Resolves aliases introduced by coincident taps.
  const std::string& resolve(const std::string& id) const;

  const std::map<RegionKey, std::string>& region_anchors() const { return region_anchors_; }
  bool pops_tapped() const { return pops_tapped_; }
  void set_pops_tapped(bool v) { pops_tapped_ = v; }

 private:
  std::map<std::string, InfraNode> nodes_;
  std::map<std::string, InfraEdge> edges_;
  std::map<std::string, std::vector<std::string>> adjacency_;  // node -> edge ids
  std::map<std::string, std::string> aliases_;                 // tap id -> node id
  std::map<RegionKey, std::string> region_anchors_;            // region -> node id
  bool pops_tapped_ = false;

  void remove_edge(const std::string& id);
  friend struct GraphSnapshotAccess;
};

// Ingests node and fiber CSV files. Fiber endpoints snap to the nearest
// peering-city/junction node within the snap radius; otherwise a
// fiber_junction node is created there (unless disabled, which makes it an
// error). Region/PoP nodes from the file are tapped afterwards; PoP taps can
// be skipped so route hop counts can be compared with and without them.
InfraGraph build_graph(const Config& cfg, const std::string& nodes_csv,
                       const std::string& fibers_csv, bool tap_pops);

struct PathFragment {
  std::vector<std::string> nodes;  // empty when src == dst
  std::vector<std::string> edges;  // traversed edge ids, |edges| = |nodes|-1
  double distance_km = 0.0;
};

// Dijkstra over edge lengths; among equal-length paths picks the smallest
// lexicographic node-id sequence. Throws infeasible_error when disconnected.
PathFragment shortest_path(const InfraGraph& g, const std::string& a, const std::string& b);

// Snapshot is a deterministic text format; rebuilding from the same inputs
// is byte-identical.
std::string graph_to_snapshot(const InfraGraph& g, const Config& cfg);
InfraGraph graph_from_snapshot(const std::string& text);
void save_graph(const InfraGraph& g, const Config& cfg, const std::string& path);
InfraGraph load_graph(const std::string& path);

}  // namespace carbonshift
