#include "carbonshift/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/wkt.hpp"

namespace carbonshift {

namespace {
// Coincidence threshold for "a tap lands exactly on a node / edge endpoint".
constexpr double kCoincidentKm = 1e-9;
// Edge geometry must start/end at its node locations within this slack.
constexpr double kEndpointSlackKm = 1.0;
}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::peering_city: return "peering_city";
    case NodeKind::pop: return "pop";
    case NodeKind::region: return "region";
    case NodeKind::fiber_junction: return "fiber_junction";
  }
  return "?";
}

const char* to_string(FiberType t) {
  return t == FiberType::land ? "land" : "submarine";
}

NodeKind node_kind_from_string(const std::string& s) {
  if (s == "peering_city") return NodeKind::peering_city;
  if (s == "pop") return NodeKind::pop;
  if (s == "region") return NodeKind::region;
  if (s == "fiber_junction") return NodeKind::fiber_junction;
  throw input_error("unknown node kind '" + s + "'");
}

FiberType fiber_type_from_string(const std::string& s) {
  if (s == "land") return FiberType::land;
  if (s == "submarine") return FiberType::submarine;
  throw input_error("unknown fiber type '" + s + "'");
}

const InfraNode& InfraGraph::node(const std::string& id) const {
  auto it = nodes_.find(resolve(id));
  if (it == nodes_.end()) throw input_error("unknown node '" + id + "'");
  return it->second;
}

const std::vector<std::string>& InfraGraph::edges_at(const std::string& node_id) const {
  static const std::vector<std::string> kEmpty;
  auto it = adjacency_.find(resolve(node_id));
  return it == adjacency_.end() ? kEmpty : it->second;
}

const std::string& InfraGraph::resolve(const std::string& id) const {
  auto it = aliases_.find(id);
  return it == aliases_.end() ? id : it->second;
}

void InfraGraph::add_node(InfraNode n) {
  validate_point(n.location);
  if (nodes_.count(n.id) || aliases_.count(n.id))
    throw input_error("duplicate node id '" + n.id + "'");
  if (n.kind == NodeKind::region) {
    if (n.cloud.empty() || n.region_id.empty())
      throw input_error("region node '" + n.id + "' needs cloud and region_id");
    region_anchors_[RegionKey{n.cloud, n.region_id}] = n.id;
  }
  nodes_.emplace(n.id, std::move(n));
}

void InfraGraph::add_edge(InfraEdge e) {
  if (edges_.count(e.id)) throw input_error("duplicate edge id '" + e.id + "'");
  if (e.a == e.b) throw input_error("self-loop edge '" + e.id + "'");
  const InfraNode& na = node(e.a);
  const InfraNode& nb = node(e.b);
  if (e.geometry.points.size() < 2 || e.geometry.length_km <= 0.0)
    throw input_error("edge '" + e.id + "' has degenerate geometry");
  if (haversine_km(e.geometry.points.front(), na.location) > kEndpointSlackKm ||
      haversine_km(e.geometry.points.back(), nb.location) > kEndpointSlackKm)
    throw input_error("edge '" + e.id + "' geometry does not meet its endpoints");
  adjacency_[e.a].push_back(e.id);
  adjacency_[e.b].push_back(e.id);
  edges_.emplace(e.id, std::move(e));
}

void InfraGraph::remove_edge(const std::string& id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw internal_error("remove_edge: no edge '" + id + "'");
  for (const std::string* n : {&it->second.a, &it->second.b}) {
    auto& vec = adjacency_[*n];
    vec.erase(std::remove(vec.begin(), vec.end(), id), vec.end());
  }
  edges_.erase(it);
}

void InfraGraph::tap_location(const std::string& id, NodeKind kind, const std::string& cloud,
                              const std::string& region_id, const GeoPoint& p) {
  validate_point(p);
  if (nodes_.count(id) || aliases_.count(id))
    throw input_error("duplicate tap id '" + id + "'");

  // Coincident with an existing node: alias, no new geometry.
  const InfraNode* coincident = nullptr;
  for (const auto& [nid, n] : nodes_)
    if (haversine_km(n.location, p) <= kCoincidentKm) { coincident = &n; break; }
  if (coincident) {
    aliases_[id] = coincident->id;
    if (kind == NodeKind::region) {
      if (cloud.empty() || region_id.empty())
        throw input_error("region tap '" + id + "' needs cloud and region_id");
      region_anchors_[RegionKey{cloud, region_id}] = coincident->id;
    }
    return;
  }

  if (edges_.empty()) throw input_error("cannot tap '" + id + "': graph has no edges");

  const InfraEdge* best_edge = nullptr;
  NearestOnLine best{};
  for (const auto& [eid, e] : edges_) {
    NearestOnLine n = nearest_on_polyline(e.geometry, p);
    if (!best_edge || n.distance_km < best.distance_km) {
      best_edge = &e;
      best = n;
    }
  }

  std::string attach_id;
  if (best.along_km <= kCoincidentKm) {
    attach_id = best_edge->a;
  } else if (best.along_km >= best_edge->geometry.length_km - kCoincidentKm) {
    attach_id = best_edge->b;
  } else {
    // Split the edge at the projection point.
    const PolyLine& geom = best_edge->geometry;
    GeoPoint q = best.point;
    std::vector<GeoPoint> part1(geom.points.begin(), geom.points.begin() + best.segment + 1);
    if (!(part1.back() == q)) part1.push_back(q);
    std::vector<GeoPoint> part2{q};
    for (size_t i = best.segment + 1; i < geom.points.size(); ++i) {
      if (part2.size() == 1 && geom.points[i] == q) continue;
      part2.push_back(geom.points[i]);
    }
    bool on_node = haversine_km(q, p) <= kCoincidentKm;
    std::string jct_id = on_node ? id : id + "__jct";
    InfraNode jct;
    jct.id = jct_id;
    jct.kind = on_node ? kind : NodeKind::fiber_junction;
    if (on_node) { jct.cloud = cloud; jct.region_id = region_id; }
    jct.location = q;
    InfraEdge e1, e2;
    e1.id = best_edge->id + "#a";
    e1.a = best_edge->a;
    e1.b = jct_id;
    e1.type = best_edge->type;
    e1.geometry = PolyLine::make(std::move(part1));
    e2.id = best_edge->id + "#b";
    e2.a = jct_id;
    e2.b = best_edge->b;
    e2.type = best_edge->type;
    e2.geometry = PolyLine::make(std::move(part2));
    std::string removed = best_edge->id;
    add_node(std::move(jct));
    remove_edge(removed);
    add_edge(std::move(e1));
    add_edge(std::move(e2));
    if (on_node) return;  // tap point was exactly on the fiber: no connector
    attach_id = jct_id;
  }

  InfraNode tap;
  tap.id = id;
  tap.kind = kind;
  tap.cloud = cloud;
  tap.region_id = region_id;
  tap.location = p;
  add_node(std::move(tap));
  InfraEdge link;
  link.id = id + "__link";
  link.a = id;
  link.b = attach_id;
  link.type = FiberType::land;
  link.geometry = PolyLine::make({p, node(attach_id).location});
  add_edge(std::move(link));
}

InfraGraph build_graph(const Config& cfg, const std::string& nodes_csv,
                       const std::string& fibers_csv, bool tap_pops) {
  double snap_km = cfg.get_double("graph.snap_radius_km");
  bool create_junctions = cfg.get_bool("graph.create_junctions");

  auto node_rows = CsvReader::read_file(nodes_csv);
  if (node_rows.empty() || CsvWriter::join(node_rows[0].fields) != "id,kind,cloud,region_id,lat,lon")
    throw input_error(nodes_csv + ": expected header id,kind,cloud,region_id,lat,lon");

  InfraGraph g;
  struct Pending { std::string id, cloud, region_id; NodeKind kind; GeoPoint p; };
  std::vector<Pending> taps;
  for (size_t i = 1; i < node_rows.size(); ++i) {
    const auto& r = node_rows[i];
    require_fields(r, 6, nodes_csv);
    NodeKind kind = node_kind_from_string(r.fields[1]);
    GeoPoint p{parse_double(r.fields[4]), normalize_lon(parse_double(r.fields[5]))};
    if (kind == NodeKind::region || kind == NodeKind::pop) {
      taps.push_back({r.fields[0], r.fields[2], r.fields[3], kind, p});
    } else {
      InfraNode n;
      n.id = r.fields[0];
      n.kind = kind;
      n.cloud = r.fields[2];
      n.region_id = r.fields[3];
      n.location = p;
      g.add_node(std::move(n));
    }
  }

  auto fiber_rows = CsvReader::read_file(fibers_csv);
  if (fiber_rows.empty() || CsvWriter::join(fiber_rows[0].fields) != "id,fiber_type,wkt")
    throw input_error(fibers_csv + ": expected header id,fiber_type,wkt");
  for (size_t i = 1; i < fiber_rows.size(); ++i) {
    const auto& r = fiber_rows[i];
    require_fields(r, 3, fibers_csv);
    auto lines = parse_wkt_lines(r.fields[2]);
    if (lines.size() != 1)
      throw input_error(fibers_csv + ":" + std::to_string(r.line_no) +
                        ": fiber geometry must be a single LINESTRING");
    PolyLine geom = std::move(lines[0]);
    std::string endpoints[2];
    for (int side = 0; side < 2; ++side) {
      GeoPoint& ep = side == 0 ? geom.points.front() : geom.points.back();
      const InfraNode* nearest = nullptr;
      double best = snap_km;
      for (const auto& [nid, n] : g.nodes()) {
        if (n.kind != NodeKind::peering_city && n.kind != NodeKind::fiber_junction) continue;
        double d = haversine_km(n.location, ep);
        if (d <= best && (!nearest || d < best || nid < nearest->id)) {
          nearest = &n;
          best = d;
        }
      }
      if (nearest) {
        endpoints[side] = nearest->id;
        ep = nearest->location;  // snap geometry onto the node
      } else if (create_junctions) {
        InfraNode j;
        j.id = r.fields[0] + (side == 0 ? "__ja" : "__jb");
        j.kind = NodeKind::fiber_junction;
        j.location = ep;
        endpoints[side] = j.id;
        g.add_node(std::move(j));
      } else {
        throw input_error(fibers_csv + ":" + std::to_string(r.line_no) + ": fiber '" +
                          r.fields[0] + "' endpoint beyond snap radius and junction creation disabled");
      }
    }
    InfraEdge e;
    e.id = r.fields[0];
    e.type = fiber_type_from_string(r.fields[1]);
    e.a = endpoints[0];
    e.b = endpoints[1];
    e.geometry = PolyLine::make(std::move(geom.points));
    g.add_edge(std::move(e));
  }

  for (const auto& t : taps) {
    if (t.kind == NodeKind::pop && !tap_pops) continue;
    g.tap_location(t.id, t.kind, t.cloud, t.region_id, t.p);
  }
  g.set_pops_tapped(tap_pops);
  return g;
}

namespace {

std::vector<std::string> path_of(const std::map<std::string, std::pair<std::string, std::string>>& parent,
                                 const std::string& start, const std::string& v) {
  std::vector<std::string> path{v};
  std::string cur = v;
  while (cur != start) {
    auto it = parent.find(cur);
    if (it == parent.end()) throw internal_error("broken parent chain at '" + cur + "'");
    cur = it->second.first;
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

PathFragment shortest_path(const InfraGraph& g, const std::string& a, const std::string& b) {
  std::string src = g.resolve(a), dst = g.resolve(b);
  g.node(src);
  g.node(dst);
  PathFragment frag;
  if (src == dst) return frag;

  std::map<std::string, double> dist;
  std::map<std::string, std::pair<std::string, std::string>> parent;  // node -> (prev, edge)
  std::set<std::string> done;
  using QItem = std::pair<double, std::string>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done.count(u)) continue;
    done.insert(u);
    if (u == dst) break;
    for (const std::string& eid : g.edges_at(u)) {
      const InfraEdge& e = g.edges().at(eid);
      const std::string& v = e.a == u ? e.b : e.a;
      if (done.count(v)) continue;
      double nd = d + e.geometry.length_km;
      auto it = dist.find(v);
      if (it == dist.end() || nd < it->second) {
        dist[v] = nd;
        parent[v] = {u, eid};
        pq.push({nd, v});
      } else if (nd == it->second) {
        // Equal length: keep the lexicographically smaller node-id path,
        // then the smaller edge id.
        auto old_path = path_of(parent, src, v);
        auto cand = path_of(parent, src, u);
        cand.push_back(v);
        if (cand < old_path ||
            (cand == old_path && eid < parent[v].second)) {
          parent[v] = {u, eid};
          pq.push({nd, v});
        }
      }
    }
  }

  if (!dist.count(dst))
    throw infeasible_error("no path between '" + a + "' and '" + b + "'");
  frag.nodes = path_of(parent, src, dst);
  for (size_t i = 1; i < frag.nodes.size(); ++i) frag.edges.push_back(parent[frag.nodes[i]].second);
  frag.distance_km = dist[dst];
  return frag;
}

struct GraphSnapshotAccess {
  static std::map<std::string, std::string>& aliases(InfraGraph& g) { return g.aliases_; }
  static const std::map<std::string, std::string>& aliases(const InfraGraph& g) { return g.aliases_; }
  static std::map<RegionKey, std::string>& anchors(InfraGraph& g) { return g.region_anchors_; }
};

std::string graph_to_snapshot(const InfraGraph& g, const Config& cfg) {
  std::string out = "# carbonshift graph v1\n";
  out += cfg.echo_header();
  out += "# pops_tapped=";
  out += g.pops_tapped() ? "1" : "0";
  out += "\n[nodes]\nid,kind,cloud,region_id,lat,lon\n";
  for (const auto& [id, n] : g.nodes()) {
    out += CsvWriter::join({id, to_string(n.kind), n.cloud, n.region_id,
                            format_double(n.location.lat), format_double(n.location.lon)});
    out += '\n';
  }
  out += "[aliases]\nalias,node,cloud,region_id\n";
  for (const auto& [alias, nid] : GraphSnapshotAccess::aliases(g)) {
    // Region metadata only when this alias carries an anchor the target
    // node would not re-register by itself.
    std::string cloud, region;
    const InfraNode& tgt = g.node(nid);
    for (const auto& [key, anchor] : g.region_anchors()) {
      if (anchor != nid) continue;
      if (tgt.kind == NodeKind::region && tgt.cloud == key.cloud && tgt.region_id == key.region)
        continue;
      cloud = key.cloud;
      region = key.region;
      break;
    }
    out += CsvWriter::join({alias, nid, cloud, region});
    out += '\n';
  }
  out += "[edges]\nid,fiber_type,a,b,wkt\n";
  for (const auto& [id, e] : g.edges()) {
    out += CsvWriter::join({id, to_string(e.type), e.a, e.b,
                            serialize_multilinestring({e.geometry})});
    out += '\n';
  }
  return out;
}

InfraGraph graph_from_snapshot(const std::string& text) {
  bool pops = text.find("# pops_tapped=1") != std::string::npos;
  auto rows = CsvReader::read_string(text);
  InfraGraph g;
  g.set_pops_tapped(pops);
  enum class Section { none, nodes, aliases, edges } sec = Section::none;
  bool header_seen = false;
  for (const auto& r : rows) {
    if (r.fields.size() == 1 && !r.fields[0].empty() && r.fields[0][0] == '[') {
      const std::string& s = r.fields[0];
      if (s == "[nodes]") sec = Section::nodes;
      else if (s == "[aliases]") sec = Section::aliases;
      else if (s == "[edges]") sec = Section::edges;
      else throw input_error("graph snapshot: unknown section " + s);
      header_seen = false;
      continue;
    }
    if (sec == Section::none) throw input_error("graph snapshot: data before any section");
    if (!header_seen) { header_seen = true; continue; }  // per-section column header
    switch (sec) {
      case Section::none:
        break;
      case Section::nodes: {
        require_fields(r, 6, "snapshot nodes");
        InfraNode n;
        n.id = r.fields[0];
        n.kind = node_kind_from_string(r.fields[1]);
        n.cloud = r.fields[2];
        n.region_id = r.fields[3];
        n.location = {parse_double(r.fields[4]), parse_double(r.fields[5])};
        g.add_node(std::move(n));
        break;
      }
      case Section::aliases: {
        require_fields(r, 4, "snapshot aliases");
        GraphSnapshotAccess::aliases(g)[r.fields[0]] = r.fields[1];
        if (!r.fields[2].empty())
          GraphSnapshotAccess::anchors(g)[RegionKey{r.fields[2], r.fields[3]}] = r.fields[1];
        break;
      }
      case Section::edges: {
        require_fields(r, 5, "snapshot edges");
        auto lines = parse_wkt_lines(r.fields[4]);
        if (lines.size() != 1) throw input_error("snapshot edge geometry must be one linestring");
        InfraEdge e;
        e.id = r.fields[0];
        e.type = fiber_type_from_string(r.fields[1]);
        e.a = r.fields[2];
        e.b = r.fields[3];
        e.geometry = std::move(lines[0]);
        g.add_edge(std::move(e));
        break;
      }
    }
  }
  return g;
}

void save_graph(const InfraGraph& g, const Config& cfg, const std::string& path) {
  write_text_file(path, graph_to_snapshot(g, cfg));
}

InfraGraph load_graph(const std::string& path) {
  return graph_from_snapshot(read_text_file(path));
}

}  // namespace carbonshift
