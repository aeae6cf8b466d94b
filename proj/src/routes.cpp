#include "carbonshift/routes.hpp"

#include <algorithm>
#include <cmath>

#include "carbonshift/csv.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/wkt.hpp"

namespace carbonshift {

namespace {

constexpr double kHopSlackKm = 1.0;
constexpr double kDistanceRelTol = 1e-6;

const char* kRouteHeader =
    "src_cloud,src_region,dst_cloud,dst_region,hop_count,distance_km,"
    "routers_latlon,fiber_wkt_paths,fiber_types,source";

std::string latlon_token(const GeoPoint& p) {
  return "(" + format_double(p.lat) + ", " + format_double(p.lon) + ")";
}

std::vector<std::string> split_list(const std::string& s, const std::string& delim) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  size_t pos = 0;
  while (true) {
    size_t next = s.find(delim, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + delim.size();
  }
}

GeoPoint parse_latlon_token(const std::string& tok, const std::string& where) {
  if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
    throw input_error(where + ": malformed coordinate tuple '" + tok + "'");
  std::string body = tok.substr(1, tok.size() - 2);
  size_t comma = body.find(", ");
  if (comma == std::string::npos)
    throw input_error(where + ": malformed coordinate tuple '" + tok + "'");
  GeoPoint p{parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 2))};
  validate_point(p);
  return p;
}

}  // namespace

const char* to_string(RouteMethod m) {
  switch (m) {
    case RouteMethod::traceroute: return "traceroute";
    case RouteMethod::inferred_endpoints: return "Inferred (endpoints)";
    case RouteMethod::inferred_endpoints_pops: return "Inferred (endpoints), with PoPs";
    case RouteMethod::inferred_waypoints: return "Inferred (waypoints)";
    case RouteMethod::inferred_waypoints_pops: return "Inferred (waypoints), with PoPs";
  }
  throw internal_error("bad route method");
}

RouteMethod route_method_from_string(const std::string& s) {
  if (s == "traceroute") return RouteMethod::traceroute;
  if (s == "Inferred (endpoints)") return RouteMethod::inferred_endpoints;
  if (s == "Inferred (endpoints), with PoPs") return RouteMethod::inferred_endpoints_pops;
  if (s == "Inferred (waypoints)") return RouteMethod::inferred_waypoints;
  if (s == "Inferred (waypoints), with PoPs") return RouteMethod::inferred_waypoints_pops;
  throw input_error("unknown route source '" + s + "'");
}

std::string route_id(const PhysicalRoute& r) { return r.src.str() + "->" + r.dst.str(); }

PhysicalRoute reversed(const PhysicalRoute& r) {
  PhysicalRoute out;
  out.src = r.dst;
  out.dst = r.src;
  out.method = r.method;
  out.hops.assign(r.hops.rbegin(), r.hops.rend());
  out.hop_points.assign(r.hop_points.rbegin(), r.hop_points.rend());
  out.segments.reserve(r.segments.size());
  for (auto it = r.segments.rbegin(); it != r.segments.rend(); ++it)
    out.segments.push_back({it->geometry.reversed(), it->type});
  out.distance_km = r.distance_km;
  return out;
}

void validate_route(const PhysicalRoute& r) {
  if (r.hops.empty()) throw input_error("route " + route_id(r) + " has no hops");
  if (r.hops.size() != r.hop_points.size())
    throw input_error("route " + route_id(r) + ": hop id/point count mismatch");
  if (r.distance_km < 0) throw input_error("route " + route_id(r) + ": negative distance");
  if (r.segments.empty()) {
    if (r.method != RouteMethod::traceroute && r.hops.size() > 1)
      throw input_error("route " + route_id(r) + ": inferred route without segments");
    return;
  }
  if (r.segments.size() != r.hops.size() - 1)
    throw input_error("route " + route_id(r) + ": segment count must be hop count - 1");
  double sum = 0.0;
  for (size_t i = 0; i < r.segments.size(); ++i) {
    const PolyLine& g = r.segments[i].geometry;
    if (haversine_km(g.points.front(), r.hop_points[i]) > kHopSlackKm ||
        haversine_km(g.points.back(), r.hop_points[i + 1]) > kHopSlackKm)
      throw input_error("route " + route_id(r) + ": segment " + std::to_string(i) +
                        " does not meet its hops");
    sum += g.length_km;
  }
  if (std::fabs(r.distance_km - sum) > kDistanceRelTol * std::max(sum, 1.0))
    throw input_error("route " + route_id(r) + ": distance does not match segment sum");
}

RegionRegistry load_region_registry(const std::string& nodes_csv) {
  auto rows = CsvReader::read_file(nodes_csv);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != "id,kind,cloud,region_id,lat,lon")
    throw input_error(nodes_csv + ": expected header id,kind,cloud,region_id,lat,lon");
  RegionRegistry reg;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_fields(r, 6, nodes_csv);
    if (node_kind_from_string(r.fields[1]) != NodeKind::region) continue;
    RegionKey key{r.fields[2], r.fields[3]};
    if (key.cloud.empty() || key.region.empty())
      throw input_error(nodes_csv + ":" + std::to_string(r.line_no) +
                        ": region row missing cloud or region_id");
    GeoPoint p{parse_double(r.fields[4]), normalize_lon(parse_double(r.fields[5]))};
    validate_point(p);
    if (!reg.emplace(key, p).second)
      throw input_error(nodes_csv + ":" + std::to_string(r.line_no) + ": duplicate region " +
                        key.str());
  }
  return reg;
}

std::vector<GeoPoint> clean_waypoints(const Config& cfg, const std::vector<RawHop>& hops,
                                      const RegionKey& src, const RegionKey& dst,
                                      const RegionRegistry& registry) {
  double max_acc = cfg.get_double("waypoint.max_accuracy_km");
  double verify = cfg.get_double("graph.endpoint_verify_km");
  auto src_it = registry.find(src), dst_it = registry.find(dst);
  if (src_it == registry.end()) throw input_error("region " + src.str() + " not in registry");
  if (dst_it == registry.end()) throw input_error("region " + dst.str() + " not in registry");

  std::vector<GeoPoint> kept;
  for (const RawHop& h : hops)
    if (h.geo_accuracy_km <= max_acc) kept.push_back(h.location);
  if (kept.empty())
    throw empty_route_error("route " + src.str() + "->" + dst.str() +
                            ": no hops left after the accuracy filter");
  if (haversine_km(kept.front(), src_it->second) > verify ||
      haversine_km(kept.back(), dst_it->second) > verify)
    throw route_rejected_error("route " + src.str() + "->" + dst.str() +
                               ": endpoints do not match the region cities");
  std::vector<GeoPoint> out;
  for (const GeoPoint& p : kept)
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  return out;
}

PhysicalRoute select_route(const Config& cfg, const std::vector<RouteCandidate>& candidates,
                           const GeoPoint& src, const GeoPoint& dst) {
  if (candidates.empty()) throw input_error("select_route: no candidates");
  double detour = cfg.get_double("route.max_detour_factor");
  double band = cfg.get_double("route.popularity_band");
  double gc = haversine_km(src, dst);

  std::vector<const RouteCandidate*> ok;
  for (const auto& c : candidates)
    if (c.route.distance_km <= detour * gc) ok.push_back(&c);
  if (ok.empty())
    throw infeasible_error("select_route: every candidate exceeds " + format_double(detour) +
                           "x the great-circle distance");
  double m = ok.front()->route.distance_km;
  for (const auto* c : ok) m = std::min(m, c->route.distance_km);

  const RouteCandidate* best = nullptr;
  for (const auto* c : ok) {
    if (c->route.distance_km > band * m) continue;
    if (!best || c->popularity > best->popularity ||
        (c->popularity == best->popularity &&
         (c->route.distance_km < best->route.distance_km ||
          (c->route.distance_km == best->route.distance_km && c->route.hops < best->route.hops))))
      best = c;
  }
  return best->route;
}

PhysicalRoute infer_route(const InfraGraph& g, const RegionKey& src, const RegionKey& dst,
                          const std::vector<GeoPoint>& waypoints, bool use_pops) {
  if (use_pops != g.pops_tapped())
    throw input_error("use_pops does not match how the graph was built");
  auto src_it = g.region_anchors().find(src);
  auto dst_it = g.region_anchors().find(dst);
  if (src_it == g.region_anchors().end())
    throw input_error("region " + src.str() + " is not tapped into the graph");
  if (dst_it == g.region_anchors().end())
    throw input_error("region " + dst.str() + " is not tapped into the graph");

  std::vector<std::string> stops{src_it->second};
  for (const GeoPoint& w : waypoints) {
    validate_point(w);
    const InfraNode* nearest = nullptr;
    double best = 0.0;
    for (const auto& [id, n] : g.nodes()) {
      double d = haversine_km(n.location, w);
      if (!nearest || d < best) {
        nearest = &n;
        best = d;
      }
    }
    if (nearest && stops.back() != nearest->id) stops.push_back(nearest->id);
  }
  if (stops.back() != dst_it->second) stops.push_back(dst_it->second);

  PhysicalRoute r;
  r.src = src;
  r.dst = dst;
  r.method = waypoints.empty()
                 ? (use_pops ? RouteMethod::inferred_endpoints_pops : RouteMethod::inferred_endpoints)
                 : (use_pops ? RouteMethod::inferred_waypoints_pops : RouteMethod::inferred_waypoints);
  r.hops.push_back(stops.front());
  for (size_t i = 1; i < stops.size(); ++i) {
    PathFragment frag = shortest_path(g, stops[i - 1], stops[i]);
    for (size_t k = 0; k + 1 < frag.nodes.size(); ++k) {
      const InfraEdge& e = g.edges().at(frag.edges[k]);
      RouteSegment seg;
      seg.type = e.type;
      seg.geometry = e.a == frag.nodes[k] ? e.geometry : e.geometry.reversed();
      r.segments.push_back(std::move(seg));
      r.hops.push_back(frag.nodes[k + 1]);
    }
  }
  for (const auto& id : r.hops) r.hop_points.push_back(g.node(id).location);
  double sum = 0.0;
  for (const auto& s : r.segments) sum += s.geometry.length_km;
  r.distance_km = sum;
  validate_route(r);
  return r;
}

PhysicalRoute traceroute_route(const RegionKey& src, const RegionKey& dst,
                               const std::vector<GeoPoint>& points) {
  if (points.empty()) throw input_error("traceroute route needs at least one hop");
  PhysicalRoute r;
  r.src = src;
  r.dst = dst;
  r.method = RouteMethod::traceroute;
  for (const GeoPoint& p : points) {
    validate_point(p);
    r.hops.push_back(latlon_token(p));
    r.hop_points.push_back(p);
  }
  double sum = 0.0;
  for (size_t i = 1; i < points.size(); ++i) sum += haversine_km(points[i - 1], points[i]);
  r.distance_km = sum;
  validate_route(r);
  return r;
}

std::map<RegionPair, std::vector<WaypointCandidate>> load_waypoints(const std::string& path) {
  auto rows = CsvReader::read_file(path);
  const char* header =
      "src_cloud,src_region,dst_cloud,dst_region,hop_index,lat,lon,accuracy_km,popularity";
  if (rows.empty() || CsvWriter::join(rows[0].fields) != header)
    throw input_error(path + ": expected header " + header);

  std::map<RegionPair, std::vector<WaypointCandidate>> out;
  RegionPair cur;
  long long prev_index = -1;
  bool have_cur = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_fields(r, 9, path);
    std::string where = path + ":" + std::to_string(r.line_no);
    RegionPair key{RegionKey{r.fields[0], r.fields[1]}, RegionKey{r.fields[2], r.fields[3]}};
    long long hop_index = parse_int64(r.fields[4]);
    RawHop hop;
    hop.location = {parse_double(r.fields[5]), normalize_lon(parse_double(r.fields[6]))};
    validate_point(hop.location);
    hop.geo_accuracy_km = parse_double(r.fields[7]);
    if (hop.geo_accuracy_km < 0) throw input_error(where + ": negative accuracy");
    long long pop = parse_int64(r.fields[8]);
    if (pop < 0) throw input_error(where + ": negative popularity");

    bool fresh = !have_cur || key != cur || hop_index <= prev_index;
    if (fresh) {
      out[key].push_back(WaypointCandidate{{}, pop});
      cur = key;
      have_cur = true;
    }
    out[key].back().hops.push_back(std::move(hop));
    prev_index = hop_index;
  }
  return out;
}

std::string export_routes(const std::vector<PhysicalRoute>& routes) {
  std::string out = kRouteHeader;
  out += '\n';
  for (const PhysicalRoute& r : routes) {
    std::string routers;
    for (size_t i = 0; i < r.hop_points.size(); ++i) {
      if (i) routers += " | ";
      routers += latlon_token(r.hop_points[i]);
    }
    std::string wkt, types;
    if (!r.segments.empty()) {
      std::vector<PolyLine> lines;
      for (const auto& s : r.segments) lines.push_back(s.geometry);
      wkt = serialize_multilinestring(lines);
      for (size_t i = 0; i < r.segments.size(); ++i) {
        if (i) types += " | ";
        types += to_string(r.segments[i].type);
      }
    }
    out += CsvWriter::join({r.src.cloud, r.src.region, r.dst.cloud, r.dst.region,
                            format_int64(int64_t(r.hops.size())), format_double(r.distance_km),
                            routers, wkt, types, to_string(r.method)});
    out += '\n';
  }
  return out;
}

std::vector<PhysicalRoute> parse_routes(const std::string& text, const std::string& origin) {
  auto rows = CsvReader::read_string(text);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != kRouteHeader)
    throw input_error(origin + ": expected route dataset header");
  std::vector<PhysicalRoute> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    require_fields(row, 10, origin);
    std::string where = origin + ":" + std::to_string(row.line_no);
    PhysicalRoute r;
    r.src = {row.fields[0], row.fields[1]};
    r.dst = {row.fields[2], row.fields[3]};
    if (r.src.cloud.empty() || r.src.region.empty() || r.dst.cloud.empty() ||
        r.dst.region.empty())
      throw input_error(where + ": empty region fields");
    long long hop_count = parse_int64(row.fields[4]);
    r.distance_km = parse_double(row.fields[5]);
    if (r.distance_km < 0) throw input_error(where + ": negative distance");
    r.method = route_method_from_string(row.fields[9]);

    for (const std::string& tok : split_list(row.fields[6], " | ")) {
      r.hops.push_back(tok);
      r.hop_points.push_back(parse_latlon_token(tok, where));
    }
    if (hop_count != int64_t(r.hops.size()))
      throw input_error(where + ": hop_count " + row.fields[4] + " but " +
                        std::to_string(r.hops.size()) + " router coordinates");

    const std::string& wkt = row.fields[7];
    const std::string& types = row.fields[8];
    if (r.method == RouteMethod::traceroute) {
      if (!wkt.empty() || !types.empty())
        throw input_error(where + ": traceroute rows carry no fiber geometry");
    } else if (wkt.empty() != types.empty()) {
      throw input_error(where + ": fiber_wkt_paths and fiber_types must come together");
    } else if (!wkt.empty()) {
      auto lines = parse_wkt_lines(wkt);
      auto type_toks = split_list(types, " | ");
      if (type_toks.size() != lines.size())
        throw input_error(where + ": " + std::to_string(type_toks.size()) +
                          " fiber types for " + std::to_string(lines.size()) + " segments");
      if (int64_t(lines.size()) != hop_count - 1)
        throw input_error(where + ": segment count must be hop_count - 1");
      for (size_t k = 0; k < lines.size(); ++k) {
        RouteSegment seg;
        seg.geometry = std::move(lines[k]);
        seg.type = fiber_type_from_string(type_toks[k]);
        r.segments.push_back(std::move(seg));
      }
    } else if (hop_count > 1) {
      throw input_error(where + ": inferred route without fiber geometry");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PhysicalRoute> import_routes(const std::string& path) {
  return parse_routes(read_text_file(path), path);
}

void save_routes(const std::vector<PhysicalRoute>& routes, const std::string& path) {
  write_text_file(path, export_routes(routes));
}

}  // namespace carbonshift
