#include "carbonshift/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "carbonshift/csv.hpp"
#include "carbonshift/devices.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/graph.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/timeutil.hpp"

namespace carbonshift {

RegionKey parse_region_key(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
    throw input_error("expected cloud:region, got '" + s + "'");
  }
  return {s.substr(0, colon), s.substr(colon + 1)};
}

void cmd_build_graph(const Config& cfg, const std::string& nodes_csv,
                     const std::string& fibers_csv, bool tap_pops,
                     const std::string& out_path) {
  const InfraGraph g = build_graph(cfg, nodes_csv, fibers_csv, tap_pops);
  save_graph(g, cfg, out_path);
}

namespace {

bool method_uses_pops(RouteMethod m) {
  return m == RouteMethod::inferred_endpoints_pops || m == RouteMethod::inferred_waypoints_pops;
}

bool method_uses_waypoints(RouteMethod m) {
  return m == RouteMethod::traceroute || m == RouteMethod::inferred_waypoints ||
         m == RouteMethod::inferred_waypoints_pops;
}

struct RouteInputs {
  const Config& cfg;
  RouteMethod method;
  const InfraGraph* graph = nullptr;
  const RegionRegistry* registry = nullptr;
  const std::map<RegionPair, std::vector<WaypointCandidate>>* waypoints = nullptr;
};

const GeoPoint& registry_point(const RegionRegistry& reg, const RegionKey& key) {
  const auto it = reg.find(key);
  if (it == reg.end()) throw input_error("unknown region '" + key.str() + "'");
  return it->second;
}

PhysicalRoute route_for_pair(const RouteInputs& in, const RegionKey& src, const RegionKey& dst) {
  if (src == dst) throw input_error("route endpoints coincide: " + src.str());
  const bool pops = method_uses_pops(in.method);
  if (!method_uses_waypoints(in.method)) {
    return infer_route(*in.graph, src, dst, {}, pops);
  }

  const auto it = in.waypoints->find({src, dst});
  if (it == in.waypoints->end() || it->second.empty()) {
    throw input_error("no traceroute candidates for " + src.str() + " -> " + dst.str());
  }
  const GeoPoint& src_pt = registry_point(*in.registry, src);
  const GeoPoint& dst_pt = registry_point(*in.registry, dst);

  std::vector<RouteCandidate> candidates;
  std::string last_reason;
  for (const WaypointCandidate& cand : it->second) {
    try {
      const auto cleaned = clean_waypoints(in.cfg, cand.hops, src, dst, *in.registry);
      PhysicalRoute r = in.method == RouteMethod::traceroute
                            ? traceroute_route(src, dst, cleaned)
                            : infer_route(*in.graph, src, dst, cleaned, pops);
      candidates.push_back({std::move(r), cand.popularity});
    } catch (const input_error& e) {
      last_reason = e.what();
    } catch (const infeasible_error& e) {
      last_reason = e.what();
    }
  }
  if (candidates.empty()) {
    throw input_error("every candidate for " + src.str() + " -> " + dst.str() +
                      " was rejected: " + last_reason);
  }
  return select_route(in.cfg, candidates, src_pt, dst_pt);
}

std::vector<RegionPair> load_pairs(const std::string& path) {
  const auto rows = CsvReader::read_file(path);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != "src,dst") {
    throw input_error(path + ": expected header src,dst");
  }
  std::vector<RegionPair> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    require_fields(rows[i], 2, path);
    try {
      out.emplace_back(parse_region_key(rows[i].fields[0]),
                       parse_region_key(rows[i].fields[1]));
    } catch (const input_error& e) {
      throw input_error(path + ":" + std::to_string(rows[i].line_no) + ": " + e.what());
    }
  }
  return out;
}

DevicePowerTable power_table(const Config& cfg, const std::string& path) {
  const std::string era = cfg.get("devices.era");
  return path.empty() ? DevicePowerTable::builtin(era) : DevicePowerTable::load(path, era);
}

}  // namespace

RoutesOutcome cmd_routes(const Config& cfg, const std::string& nodes_csv,
                         const std::string& fibers_csv, const std::string& waypoints_csv,
                         const std::string& pairs_csv, RouteMethod method, bool strict,
                         const std::string& out_csv) {
  RoutesOutcome oc;
  const auto pairs = load_pairs(pairs_csv);
  const RegionRegistry registry = load_region_registry(nodes_csv);

  InfraGraph graph;
  const bool needs_graph = method != RouteMethod::traceroute;
  if (needs_graph) graph = build_graph(cfg, nodes_csv, fibers_csv, method_uses_pops(method));

  std::map<RegionPair, std::vector<WaypointCandidate>> waypoints;
  if (method_uses_waypoints(method)) {
    if (waypoints_csv.empty()) {
      throw input_error(std::string("method '") + to_string(method) +
                        "' requires a waypoints file");
    }
    waypoints = load_waypoints(waypoints_csv);
  }

  RouteInputs in{cfg, method, needs_graph ? &graph : nullptr, &registry, &waypoints};
  std::vector<PhysicalRoute> routes;
  for (const auto& [src, dst] : pairs) {
    try {
      routes.push_back(route_for_pair(in, src, dst));
    } catch (const infeasible_error& e) {
      if (strict) throw;
      oc.warnings.push_back(src.str() + " -> " + dst.str() + ": " + e.what());
    } catch (const input_error& e) {
      if (strict) throw;
      oc.warnings.push_back(src.str() + " -> " + dst.str() + ": " + e.what());
    }
  }
  write_text_file(out_csv, cfg.echo_header() + export_routes(routes));
  oc.written = routes.size();
  return oc;
}

CidtOutcome cmd_cidt(const Config& cfg, const std::string& routes_csv,
                     const std::string& device_power_csv, const std::string& isos_csv,
                     const std::string& cie_csv, int64_t t0, int64_t t1,
                     const std::string& out_series_csv, const std::string& out_stats_csv) {
  CidtOutcome oc;
  const auto routes = import_routes(routes_csv);
  const IsoMap isos = IsoMap::load(isos_csv);
  const DevicePowerTable powers = power_table(cfg, device_power_csv);
  const CieStore store = CieStore::ingest(cie_csv, cfg);

  std::vector<CidtSeries> all;
  for (const PhysicalRoute& r : routes) {
    try {
      all.push_back(route_cidt(r, powers, isos, store, cfg, t0, t1));
    } catch (const below_cutoff_error& e) {
      ++oc.skipped;
      oc.warnings.push_back(route_id(r) + ": " + e.what());
    }
  }
  if (all.empty()) {
    throw infeasible_error("no route passed the carbon coverage cutoff");
  }
  oc.written = all.size();
  if (!out_series_csv.empty()) write_text_file(out_series_csv, cidt_series_csv(all, cfg));
  if (!out_stats_csv.empty()) write_text_file(out_stats_csv, cidt_stats_csv(cidt_stats(all), cfg));
  return oc;
}

SchedEnv SchedEnv::assemble(const Config& cfg, const SchedDataset& ds, int64_t t0, int64_t t1) {
  if (t1 <= t0) throw input_error("carbon window is empty");
  SchedEnv env;
  env.t0_ = t0;
  env.t1_ = t1;
  env.store_ = CieStore::ingest(ds.cie, cfg);
  const IsoMap isos = IsoMap::load(ds.isos);
  const DevicePowerTable powers = power_table(cfg, ds.device_power);
  const RegionRegistry registry = load_region_registry(ds.nodes);

  InfraGraph graph;
  const bool needs_graph = ds.method != RouteMethod::traceroute;
  if (needs_graph) graph = build_graph(cfg, ds.nodes, ds.fibers, method_uses_pops(ds.method));

  std::map<RegionPair, std::vector<WaypointCandidate>> waypoints;
  if (method_uses_waypoints(ds.method)) {
    if (ds.waypoints.empty()) {
      throw input_error(std::string("method '") + to_string(ds.method) +
                        "' requires a waypoints file");
    }
    waypoints = load_waypoints(ds.waypoints);
  }

  const double fallback = cfg.get_double("iso.fallback_radius_km");
  for (const auto& [key, pt] : registry) {
    const std::string id = key.str();
    const std::string iso = isos.locate(pt, fallback);
    if (iso.empty()) {
      env.warnings_.push_back("region " + id + " matches no grid zone; dropped");
      continue;
    }
    if (!env.store_.covers(iso, t0, t1)) {
      env.warnings_.push_back("region " + id + " (zone " + iso +
                              ") lacks carbon data over the window; dropped");
      continue;
    }
    env.region_iso_[id] = iso;
  }
  if (env.region_iso_.empty()) {
    throw input_error("no region has carbon data over the requested window");
  }

  RouteInputs in{cfg, ds.method, needs_graph ? &graph : nullptr, &registry, &waypoints};
  std::vector<std::string> ids;
  ids.reserve(env.region_iso_.size());
  for (const auto& [id, iso] : env.region_iso_) ids.push_back(id);
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      const RegionKey a = parse_region_key(ids[i]);
      const RegionKey b = parse_region_key(ids[j]);
      try {
        const PhysicalRoute route = route_for_pair(in, a, b);
        CidtSeries cs = route_cidt(route, powers, isos, env.store_, cfg, t0, t1);
        env.cidt_[{ids[i], ids[j]}] = cs.series;
        env.cidt_[{ids[j], ids[i]}] = std::move(cs.series);
      } catch (const infeasible_error& e) {
        env.warnings_.push_back(ids[i] + " <-> " + ids[j] + ": " + e.what());
      } catch (const input_error& e) {
        env.warnings_.push_back(ids[i] + " <-> " + ids[j] + ": " + e.what());
      }
    }
  }
  return env;
}

std::vector<RegionSeries> SchedEnv::regions_for(const std::string& origin) const {
  const auto it = region_iso_.find(origin);
  if (it == region_iso_.end()) {
    throw input_error("origin region '" + origin + "' has no usable carbon data");
  }
  std::vector<RegionSeries> out;
  for (const auto& [id, iso] : region_iso_) {
    RegionSeries rs;
    rs.id = id;
    rs.cie = &store_.series_for(iso, t0_, t1_);
    if (id != origin) {
      const auto in = cidt_.find({origin, id});
      if (in == cidt_.end()) continue;  // unreachable pair, warned at assembly
      rs.cidt_in = &in->second;
      rs.cidt_out = &cidt_.at({id, origin});
    }
    out.push_back(rs);
  }
  return out;
}

std::vector<std::string> SchedEnv::region_ids() const {
  std::vector<std::string> out;
  out.reserve(region_iso_.size());
  for (const auto& [id, iso] : region_iso_) out.push_back(id);
  return out;
}

namespace {

std::string plan_row(const RegionResult& r, const RegionResult* origin) {
  if (!r.feasible) {
    return CsvWriter::join({r.region, "0", "", "", "", "", "", "", "", "", "", "", "", "",
                            r.error});
  }
  std::string net, comp, over;
  if (origin && origin->feasible && origin->ce_total_g > 0) {
    const Saving s = net_saving(r, *origin);
    net = format_double(s.net_pct);
    comp = format_double(s.compute_pct);
    over = format_double(s.overhead_pct);
  }
  return CsvWriter::join({r.region, "1", format_time8601(r.plan.t1),
                          format_time8601(r.plan.t2), format_time8601(r.plan.t3),
                          format_double(r.plan.input_g), format_double(r.plan.compute_g),
                          format_double(r.plan.output_g), format_double(r.ce_network_g),
                          format_double(r.ce_endpoint_g), format_double(r.ce_total_g), net,
                          comp, over, ""});
}

}  // namespace

OptimizeOutcome cmd_optimize(const Config& cfg, const SchedDataset& ds, const JobRequest& job,
                             const std::string& out_csv) {
  OptimizeOutcome oc;
  const SchedEnv env = SchedEnv::assemble(cfg, ds, job.start_time, job.deadline);
  oc.warnings = env.warnings();

  Workload w;
  w.name = "job";
  w.cores = job.cores;
  w.runtime_h = job.runtime_h;
  w.input_gb = job.input_gb;
  w.output_gb = job.output_gb;
  const JobSpec spec = make_job(w, job.origin, job.start_time, job.deadline);
  const PowerConfig power = PowerConfig::from_config(cfg);
  oc.results = best_region(spec, env.regions_for(job.origin), power,
                           cfg.get_int("optimize.quantum_s"));

  const RegionResult* origin = nullptr;
  for (const auto& r : oc.results) {
    if (r.region == job.origin) origin = &r;
  }
  if (!out_csv.empty()) {
    std::string csv = cfg.echo_header();
    csv +=
        "region,feasible,t1,t2,t3,input_g,compute_g,output_g,network_g,endpoint_g,total_g,"
        "saving_net_pct,saving_compute_pct,saving_overhead_pct,note\n";
    for (const auto& r : oc.results) csv += plan_row(r, origin) + "\n";
    write_text_file(out_csv, csv);
  }
  return oc;
}

namespace {

struct SweepRun {
  SweepResult result;
  std::vector<std::string> warnings;
};

SweepRun run_sweep(const Config& cfg, const SchedDataset& ds, const std::string& workloads_csv,
                   const SweepRequest& req) {
  if (req.to <= req.from) throw input_error("sweep range is empty");
  if (req.deadline_s <= 0) throw input_error("sweep deadline must be positive");
  SweepRun run;
  // The env outlives the sweep; every RegionSeries points into it.
  const SchedEnv env = SchedEnv::assemble(cfg, ds, req.from, req.to + req.deadline_s);
  run.warnings = env.warnings();

  const auto workloads = load_workloads(workloads_csv);
  std::vector<JobSpec> jobs;
  jobs.reserve(workloads.size());
  for (const auto& w : workloads) {
    jobs.push_back(make_job(w, req.origin, req.from, req.from + req.deadline_s));
  }
  const PowerConfig power = PowerConfig::from_config(cfg);
  const RegionProvider provider = [&env](const std::string& o) { return env.regions_for(o); };
  run.result = sweep(jobs, req.from, req.to, req.stride, req.deadline_s, provider, power,
                     cfg.get_int("optimize.quantum_s"), static_cast<int>(cfg.get_int("threads")),
                     req.policy, cfg.get_int("lb.k"), req.seed);
  return run;
}

std::string sample_row(const SweepSample& s) {
  return CsvWriter::join({format_time8601(s.t), s.workload, s.origin, s.best, s.chosen,
                          format_double(s.best_g), format_double(s.chosen_g),
                          format_double(s.time_only_g), format_double(s.no_shift_g),
                          format_double(s.saving_vs_time_pct),
                          format_double(s.saving_vs_noshift_pct),
                          format_int64(static_cast<int64_t>(s.eligible))});
}

constexpr const char* kSampleHeader =
    "t,workload,origin,best,chosen,best_g,chosen_g,time_only_g,no_shift_g,"
    "saving_vs_time_pct,saving_vs_noshift_pct,eligible";

}  // namespace

SweepOutcome cmd_sweep(const Config& cfg, const SchedDataset& ds,
                       const std::string& workloads_csv, const SweepRequest& req,
                       const std::string& out_samples_csv, const std::string& out_hist_csv) {
  SweepRun run = run_sweep(cfg, ds, workloads_csv, req);
  if (!out_samples_csv.empty()) {
    std::string csv = cfg.echo_header();
    csv += std::string(kSampleHeader) + "\n";
    for (const auto& s : run.result.samples) csv += sample_row(s) + "\n";
    write_text_file(out_samples_csv, csv);
  }
  if (!out_hist_csv.empty()) {
    std::string csv = cfg.echo_header();
    csv += "group,key,region,count\n";
    for (const auto& [key, n] : run.result.by_hour) {
      csv += CsvWriter::join({"hour_of_day", format_int64(key.first), key.second,
                              format_int64(n)}) +
             "\n";
    }
    for (const auto& [key, n] : run.result.by_month) {
      csv += CsvWriter::join({"month", format_int64(key.first), key.second, format_int64(n)}) +
             "\n";
    }
    write_text_file(out_hist_csv, csv);
  }
  return {std::move(run.result), std::move(run.warnings)};
}

LoadBalanceOutcome cmd_loadbalance(const Config& cfg, const SchedDataset& ds,
                                   const std::string& workloads_csv, const SweepRequest& req,
                                   const std::string& out_csv) {
  SweepRun run = run_sweep(cfg, ds, workloads_csv, req);
  LoadBalanceOutcome oc;
  double chosen_sum = 0.0, best_sum = 0.0;
  for (const auto& s : run.result.samples) {
    chosen_sum += s.chosen_g;
    best_sum += s.best_g;
    ++oc.picks[s.chosen];
  }
  const double n = static_cast<double>(run.result.samples.size());
  oc.mean_chosen_g = chosen_sum / n;
  oc.mean_best_g = best_sum / n;

  if (!out_csv.empty()) {
    std::string csv = cfg.echo_header();
    csv += "# policy=" + std::string(to_string(req.policy)) + "\n";
    csv += "# seed=" + std::to_string(req.seed) + "\n";
    csv += "# mean_chosen_g=" + format_double(oc.mean_chosen_g) + "\n";
    csv += "# mean_best_g=" + format_double(oc.mean_best_g) + "\n";
    for (const auto& [region, count] : oc.picks) {
      csv += "# picks_" + region + "=" + format_int64(count) + "\n";
    }
    csv += std::string(kSampleHeader) + "\n";
    for (const auto& s : run.result.samples) csv += sample_row(s) + "\n";
    write_text_file(out_csv, csv);
  }
  oc.result = std::move(run.result);
  oc.warnings = std::move(run.warnings);
  return oc;
}

void cmd_overhead_curve(const Config& cfg, double ratio_max, int steps,
                        double cidt_mean_g_per_gb, double cie_remote_g_per_kwh,
                        double cie_origin_g_per_kwh, const std::string& out_csv) {
  if (!(ratio_max > 0)) throw input_error("ratio_max must be positive");
  if (steps < 1) throw input_error("steps must be >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid.push_back(ratio_max * i / steps);
  const auto curve = migration_overhead_curve(grid, cidt_mean_g_per_gb, cie_remote_g_per_kwh,
                                              cie_origin_g_per_kwh,
                                              PowerConfig::from_config(cfg));
  std::string csv = cfg.echo_header();
  csv += "ratio_gb_per_kwh,overhead_pct\n";
  for (const auto& [ratio, pct] : curve) {
    csv += CsvWriter::join({format_double(ratio), format_double(pct)}) + "\n";
  }
  write_text_file(out_csv, csv);
}

EstimateEvalOutcome cmd_estimate_eval(const Config& cfg, const std::string& routes_csv,
                                      const std::string& device_power_csv,
                                      const std::string& isos_csv, const std::string& cie_csv,
                                      const std::set<std::string>& hidden, int64_t t0,
                                      int64_t t1, const std::string& out_csv) {
  EstimateEvalOutcome oc;
  const auto routes = import_routes(routes_csv);
  const IsoMap isos = IsoMap::load(isos_csv);
  const DevicePowerTable powers = power_table(cfg, device_power_csv);
  const CieStore full = CieStore::ingest(cie_csv, cfg);
  const CieStore masked = full.without(hidden);

  for (const PhysicalRoute& r : routes) {
    CidtSeries truth;
    try {
      truth = route_cidt(r, powers, isos, full, cfg, t0, t1);
    } catch (const infeasible_error& e) {
      oc.warnings.push_back(route_id(r) + ": no ground truth: " + e.what());
      continue;
    }
    CidtSeries est;
    try {
      est = route_cidt(r, powers, isos, masked, cfg, t0, t1);
    } catch (const below_cutoff_error& e) {
      ++oc.rejected;
      oc.warnings.push_back(route_id(r) + ": " + e.what());
      continue;
    }
    EstimateEvalRow row;
    row.route = route_id(r);
    row.coverage = est.coverage_ratio;
    row.true_mean = time_mean(truth.series);
    row.est_mean = time_mean(est.series);
    if (!(row.true_mean > 0)) {
      oc.warnings.push_back(row.route + ": zero ground-truth intensity; skipped");
      continue;
    }
    row.error_pct = std::abs(row.est_mean - row.true_mean) / row.true_mean * 100.0;
    oc.rows.push_back(std::move(row));
  }
  if (oc.rows.empty()) {
    throw infeasible_error("no route survived the estimation evaluation");
  }
  double sum = 0.0;
  for (const auto& row : oc.rows) sum += row.error_pct;
  oc.mean_error_pct = sum / static_cast<double>(oc.rows.size());

  if (!out_csv.empty()) {
    std::string csv = cfg.echo_header();
    std::string hidden_list;
    for (const auto& h : hidden) {
      if (!hidden_list.empty()) hidden_list += ';';
      hidden_list += h;
    }
    csv += "# hidden=" + hidden_list + "\n";
    csv += "# rejected=" + std::to_string(oc.rejected) + "\n";
    csv += "# mean_error_pct=" + format_double(oc.mean_error_pct) + "\n";
    csv += "route_id,coverage_ratio,true_mean_g_per_gb,est_mean_g_per_gb,error_pct\n";
    for (const auto& row : oc.rows) {
      csv += CsvWriter::join({row.route, format_double(row.coverage),
                              format_double(row.true_mean), format_double(row.est_mean),
                              format_double(row.error_pct)}) +
             "\n";
    }
    write_text_file(out_csv, csv);
  }
  return oc;
}

}  // namespace carbonshift
