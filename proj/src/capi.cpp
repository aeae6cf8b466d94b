#include "carbonshift/carbonshift.h"

#include <cstring>
#include <exception>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/pipeline.hpp"
#include "carbonshift/routes.hpp"
#include "carbonshift/scheduler.hpp"
#include "carbonshift/timeutil.hpp"

using namespace carbonshift;

struct cs_config {
  Config impl;
};

struct cs_dataset {
  SchedDataset impl;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_warnings;

void stash_warnings(const std::vector<std::string>& warnings) {
  g_warnings.clear();
  for (const auto& w : warnings) {
    if (!g_warnings.empty()) g_warnings += '\n';
    g_warnings += w;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  g_error.clear();
  g_warnings.clear();
  try {
    return fn();
  } catch (const input_error& e) {
    g_error = e.what();
    return CS_INPUT;
  } catch (const infeasible_error& e) {
    g_error = e.what();
    return CS_INFEASIBLE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return CS_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return CS_INTERNAL;
  }
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

int require(const void* p, const char* what) {
  if (p) return CS_OK;
  g_error = std::string(what) + " is null";
  return CS_INPUT;
}

RouteMethod method_from_token(const std::string& token) {
  if (token == "endpoints") return RouteMethod::inferred_endpoints;
  if (token == "endpoints-pops") return RouteMethod::inferred_endpoints_pops;
  if (token == "waypoints") return RouteMethod::inferred_waypoints;
  if (token == "waypoints-pops") return RouteMethod::inferred_waypoints_pops;
  return route_method_from_string(token);  // traceroute or a dataset string
}

int copy_out(const std::string& value, char* buf, size_t cap, const char* what) {
  if (!buf || cap == 0) {
    g_error = std::string(what) + " buffer is empty";
    return CS_INPUT;
  }
  if (value.size() + 1 > cap) {
    g_error = std::string(what) + " buffer is too small";
    return CS_INPUT;
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return CS_OK;
}

std::set<std::string> split_list(const std::string& csv) {
  std::set<std::string> out;
  size_t start = 0;
  while (start <= csv.size()) {
    size_t end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    std::string item = csv.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.insert(item);
    start = end + 1;
  }
  return out;
}

SweepRequest make_request(const char* origin, long long from, long long to, long long stride,
                          long long deadline_s, const char* policy, unsigned long long seed) {
  SweepRequest req;
  req.origin = str(origin);
  req.from = from;
  req.to = to;
  req.stride = stride;
  req.deadline_s = deadline_s;
  req.policy = lb_policy_from_string(str(policy));
  req.seed = seed;
  return req;
}

}  // namespace

extern "C" {

const char* cs_version(void) { return Config::tool_version(); }
const char* cs_last_error(void) { return g_error.c_str(); }
const char* cs_last_warnings(void) { return g_warnings.c_str(); }

cs_config* cs_config_new(void) { return new (std::nothrow) cs_config{}; }
void cs_config_free(cs_config* cfg) { delete cfg; }

int cs_config_set(cs_config* cfg, const char* key, const char* value) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    cfg->impl.set(str(key), str(value));
    return CS_OK;
  });
}

int cs_config_load_file(cs_config* cfg, const char* path) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    cfg->impl.load_file(str(path));
    return CS_OK;
  });
}

int cs_config_load_env(cs_config* cfg) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    cfg->impl.load_env();
    return CS_OK;
  });
}

cs_dataset* cs_dataset_new(void) { return new (std::nothrow) cs_dataset{}; }
void cs_dataset_free(cs_dataset* ds) { delete ds; }

int cs_dataset_set(cs_dataset* ds, const char* key, const char* value) {
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    const std::string k = str(key);
    const std::string v = str(value);
    if (k == "nodes") {
      ds->impl.nodes = v;
    } else if (k == "fibers") {
      ds->impl.fibers = v;
    } else if (k == "waypoints") {
      ds->impl.waypoints = v;
    } else if (k == "isos") {
      ds->impl.isos = v;
    } else if (k == "device_power") {
      ds->impl.device_power = v;
    } else if (k == "cie") {
      ds->impl.cie = v;
    } else if (k == "method") {
      ds->impl.method = method_from_token(v);
    } else {
      throw input_error("unknown dataset key '" + k + "'");
    }
    return CS_OK;
  });
}

int cs_parse_time(const char* iso8601_utc, long long* epoch_s) {
  if (int rc = require(epoch_s, "epoch output")) return rc;
  return guarded([&] {
    *epoch_s = parse_time8601(str(iso8601_utc));
    return CS_OK;
  });
}

int cs_format_time(long long epoch_s, char* buf, size_t cap) {
  g_error.clear();
  g_warnings.clear();
  return copy_out(format_time8601(epoch_s), buf, cap, "time");
}

int cs_build_graph(const cs_config* cfg, const char* nodes_csv, const char* fibers_csv,
                   int tap_pops, const char* out_path) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    cmd_build_graph(cfg->impl, str(nodes_csv), str(fibers_csv), tap_pops != 0, str(out_path));
    return CS_OK;
  });
}

int cs_routes(const cs_config* cfg, const cs_dataset* ds, const char* pairs_csv,
              const char* method, int strict, const char* out_csv, size_t* written) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    RoutesOutcome oc =
        cmd_routes(cfg->impl, ds->impl.nodes, ds->impl.fibers, ds->impl.waypoints,
                   str(pairs_csv), method_from_token(str(method)), strict != 0, str(out_csv));
    stash_warnings(oc.warnings);
    if (written) *written = oc.written;
    return CS_OK;
  });
}

int cs_cidt(const cs_config* cfg, const cs_dataset* ds, const char* routes_csv, long long t0,
            long long t1, const char* out_series_csv, const char* out_stats_csv,
            size_t* written, size_t* skipped) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    CidtOutcome oc = cmd_cidt(cfg->impl, str(routes_csv), ds->impl.device_power, ds->impl.isos,
                              ds->impl.cie, t0, t1, str(out_series_csv), str(out_stats_csv));
    stash_warnings(oc.warnings);
    if (written) *written = oc.written;
    if (skipped) *skipped = oc.skipped;
    return CS_OK;
  });
}

int cs_optimize(const cs_config* cfg, const cs_dataset* ds, const char* origin,
                long long start_time, long long deadline, long long cores, double runtime_h,
                double input_gb, double output_gb, const char* out_csv, char* best_region,
                size_t best_region_cap, double* best_total_g) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    JobRequest job;
    job.origin = str(origin);
    job.start_time = start_time;
    job.deadline = deadline;
    job.cores = cores;
    job.runtime_h = runtime_h;
    job.input_gb = input_gb;
    job.output_gb = output_gb;
    OptimizeOutcome oc = cmd_optimize(cfg->impl, ds->impl, job, str(out_csv));
    stash_warnings(oc.warnings);
    if (best_total_g) *best_total_g = oc.results.front().ce_total_g;
    if (best_region) {
      return copy_out(oc.results.front().region, best_region, best_region_cap, "region");
    }
    return CS_OK;
  });
}

int cs_sweep(const cs_config* cfg, const cs_dataset* ds, const char* workloads_csv,
             const char* origin, long long from, long long to, long long stride,
             long long deadline_s, const char* policy, unsigned long long seed,
             const char* out_samples_csv, const char* out_hist_csv, size_t* samples) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    SweepOutcome oc =
        cmd_sweep(cfg->impl, ds->impl, str(workloads_csv),
                  make_request(origin, from, to, stride, deadline_s, policy, seed),
                  str(out_samples_csv), str(out_hist_csv));
    stash_warnings(oc.warnings);
    if (samples) *samples = oc.result.samples.size();
    return CS_OK;
  });
}

int cs_loadbalance(const cs_config* cfg, const cs_dataset* ds, const char* workloads_csv,
                   const char* origin, long long from, long long to, long long stride,
                   long long deadline_s, const char* policy, unsigned long long seed,
                   const char* out_csv, double* mean_chosen_g, double* mean_best_g) {
  if (int rc = require(cfg, "config")) return rc;
  if (int rc = require(ds, "dataset")) return rc;
  return guarded([&] {
    LoadBalanceOutcome oc =
        cmd_loadbalance(cfg->impl, ds->impl, str(workloads_csv),
                        make_request(origin, from, to, stride, deadline_s, policy, seed),
                        str(out_csv));
    stash_warnings(oc.warnings);
    if (mean_chosen_g) *mean_chosen_g = oc.mean_chosen_g;
    if (mean_best_g) *mean_best_g = oc.mean_best_g;
    return CS_OK;
  });
}

int cs_overhead_curve(const cs_config* cfg, double ratio_max, int steps,
                      double cidt_mean_g_per_gb, double cie_remote_g_per_kwh,
                      double cie_origin_g_per_kwh, const char* out_csv) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    cmd_overhead_curve(cfg->impl, ratio_max, steps, cidt_mean_g_per_gb, cie_remote_g_per_kwh,
                       cie_origin_g_per_kwh, str(out_csv));
    return CS_OK;
  });
}

int cs_estimate_eval(const cs_config* cfg, const char* routes_csv,
                     const char* device_power_csv, const char* isos_csv, const char* cie_csv,
                     const char* hidden_isos, long long t0, long long t1, const char* out_csv,
                     size_t* rows, size_t* rejected, double* mean_error_pct) {
  if (int rc = require(cfg, "config")) return rc;
  return guarded([&] {
    EstimateEvalOutcome oc =
        cmd_estimate_eval(cfg->impl, str(routes_csv), str(device_power_csv), str(isos_csv),
                          str(cie_csv), split_list(str(hidden_isos)), t0, t1, str(out_csv));
    stash_warnings(oc.warnings);
    if (rows) *rows = oc.rows.size();
    if (rejected) *rejected = oc.rejected;
    if (mean_error_pct) *mean_error_pct = oc.mean_error_pct;
    return CS_OK;
  });
}

}  // extern "C"
