#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "carbonshift/carbon.hpp"
#include "carbonshift/cidt.hpp"
#include "carbonshift/config.hpp"
#include "carbonshift/routes.hpp"
#include "carbonshift/scheduler.hpp"

namespace carbonshift {

// "cloud:region" -> RegionKey
RegionKey parse_region_key(const std::string& s);

// File-level commands shared by the shared-library surface and the CLI.
// Each writes CSV/snapshot artifacts stamped with the config echo header
// and reports non-fatal skips as warnings.

void cmd_build_graph(const Config& cfg, const std::string& nodes_csv,
                     const std::string& fibers_csv, bool tap_pops,
                     const std::string& out_path);

struct RoutesOutcome {
  size_t written = 0;
  std::vector<std::string> warnings;
};

// Pairs file: header `src,dst`, one requested pair per row. Waypoint and
// traceroute methods read candidate hop lists from the waypoints file;
// pairs without usable candidates (or disconnected pairs) are skipped with
// a warning unless strict.
RoutesOutcome cmd_routes(const Config& cfg, const std::string& nodes_csv,
                         const std::string& fibers_csv, const std::string& waypoints_csv,
                         const std::string& pairs_csv, RouteMethod method, bool strict,
                         const std::string& out_csv);

struct CidtOutcome {
  size_t written = 0;
  size_t skipped = 0;
  std::vector<std::string> warnings;
};

// Expands each route of the dataset and emits its transfer-intensity series
// over [t0, t1), plus per-route stats when out_stats_csv is non-empty.
// Routes whose carbon coverage falls below the cutoff are skipped.
CidtOutcome cmd_cidt(const Config& cfg, const std::string& routes_csv,
                     const std::string& device_power_csv, const std::string& isos_csv,
                     const std::string& cie_csv, int64_t t0, int64_t t1,
                     const std::string& out_series_csv, const std::string& out_stats_csv);

// Everything the scheduling commands need to assemble region series.
struct SchedDataset {
  std::string nodes;
  std::string fibers;
  std::string waypoints;  // required by waypoint/traceroute methods
  std::string isos;
  std::string device_power;  // empty -> builtin table for the configured era
  std::string cie;
  RouteMethod method = RouteMethod::inferred_waypoints_pops;
};

// Owns the carbon store and the per-pair transfer series; RegionSeries
// handed out by regions_for() point into it, so keep it alive while they
// are in use. Move-only for that reason.
class SchedEnv {
 public:
  SchedEnv(SchedEnv&&) = default;
  SchedEnv& operator=(SchedEnv&&) = default;
  SchedEnv(const SchedEnv&) = delete;
  SchedEnv& operator=(const SchedEnv&) = delete;

  // Builds the graph, infers a route per region pair, expands device
  // chains, and computes CIDT over [t0, t1). Regions without carbon data
  // and pairs without routes (or below the coverage cutoff) are dropped
  // with a warning.
  static SchedEnv assemble(const Config& cfg, const SchedDataset& ds, int64_t t0, int64_t t1);

  // All usable regions against this origin: the origin itself plus every
  // region reachable through a transfer series.
  std::vector<RegionSeries> regions_for(const std::string& origin) const;

  std::vector<std::string> region_ids() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  int64_t window_begin() const { return t0_; }
  int64_t window_end() const { return t1_; }
  const CieStore& store() const { return store_; }

 private:
  SchedEnv() = default;

  CieStore store_;
  std::map<std::string, std::string> region_iso_;  // usable regions only
  std::map<std::pair<std::string, std::string>, StepSeries> cidt_;
  int64_t t0_ = 0;
  int64_t t1_ = 0;
  std::vector<std::string> warnings_;
};

struct JobRequest {
  std::string origin;
  int64_t start_time = 0;
  int64_t deadline = 0;
  int64_t cores = 1;
  double runtime_h = 0.0;
  double input_gb = 0.0;   // gigabytes
  double output_gb = 0.0;  // gigabytes
};

struct OptimizeOutcome {
  std::vector<RegionResult> results;  // sorted as returned by best_region
  std::vector<std::string> warnings;
};

// Ranks every region for one job and writes a per-region plan CSV with the
// exact savings decomposition against the origin's own optimum.
OptimizeOutcome cmd_optimize(const Config& cfg, const SchedDataset& ds, const JobRequest& job,
                             const std::string& out_csv);

struct SweepRequest {
  std::string origin;
  int64_t from = 0;
  int64_t to = 0;
  int64_t stride = 3600;
  int64_t deadline_s = 0;
  LbPolicy policy = LbPolicy::best;
  uint64_t seed = 0;
};

struct SweepOutcome {
  SweepResult result;
  std::vector<std::string> warnings;
};

// Sweeps every workload in the file across the request-time range and
// writes the per-sample CSV plus hour-of-day/month winner histograms.
SweepOutcome cmd_sweep(const Config& cfg, const SchedDataset& ds,
                       const std::string& workloads_csv, const SweepRequest& req,
                       const std::string& out_samples_csv, const std::string& out_hist_csv);

struct LoadBalanceOutcome {
  SweepResult result;
  double mean_chosen_g = 0.0;
  double mean_best_g = 0.0;
  std::map<std::string, int64_t> picks;
  std::vector<std::string> warnings;
};

// Same grid as cmd_sweep but reports the policy's picks and their mean
// emission against the per-sample best.
LoadBalanceOutcome cmd_loadbalance(const Config& cfg, const SchedDataset& ds,
                                   const std::string& workloads_csv, const SweepRequest& req,
                                   const std::string& out_csv);

// Analytic overhead curve over an evenly spaced ratio grid.
void cmd_overhead_curve(const Config& cfg, double ratio_max, int steps,
                        double cidt_mean_g_per_gb, double cie_remote_g_per_kwh,
                        double cie_origin_g_per_kwh, const std::string& out_csv);

struct EstimateEvalRow {
  std::string route;
  double coverage = 1.0;
  double true_mean = 0.0;
  double est_mean = 0.0;
  double error_pct = 0.0;
};

struct EstimateEvalOutcome {
  std::vector<EstimateEvalRow> rows;
  size_t rejected = 0;  // routes below the coverage cutoff after hiding
  double mean_error_pct = 0.0;
  std::vector<std::string> warnings;
};

// Hide-and-restore evaluation of the estimation policy: computes each
// route's transfer intensity with full data, recomputes it with the given
// zones hidden, and reports the time-mean error.
EstimateEvalOutcome cmd_estimate_eval(const Config& cfg, const std::string& routes_csv,
                                      const std::string& device_power_csv,
                                      const std::string& isos_csv, const std::string& cie_csv,
                                      const std::set<std::string>& hidden, int64_t t0,
                                      int64_t t1, const std::string& out_csv);

}  // namespace carbonshift
