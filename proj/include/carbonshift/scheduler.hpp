#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/optimizer.hpp"
#include "carbonshift/step_series.hpp"

namespace carbonshift {

struct PowerConfig {
  double watts_per_core = 5.0;
  double server_power_w = 500.0;
  double transfer_share = 0.2;  // endpoint share of server power per side
  double pue_dc = 1.0;
  double bandwidth_gbps = 1.0;

  static PowerConfig from_config(const Config& cfg);
  double transfer_power_w() const { return transfer_share * server_power_w; }
};

// A job instance pinned to an origin region and a scheduling window.
// Sizes are gigabits; the workload file carries gigabytes.
struct JobSpec {
  std::string name;
  int64_t core_count = 1;
  int64_t runtime_s = 0;
  int64_t start_time = 0;
  int64_t deadline = 0;
  double input_gbit = 0.0;
  double output_gbit = 0.0;
  std::string origin;
};

struct Workload {
  std::string name;
  int64_t cores = 1;
  double runtime_h = 0.0;
  double input_gb = 0.0;   // gigabytes
  double output_gb = 0.0;  // gigabytes
};

// CSV `name,cores,runtime_h,input_gb,output_gb`.
std::vector<Workload> load_workloads(const std::string& path);
JobSpec make_job(const Workload& w, const std::string& origin, int64_t start_time,
                 int64_t deadline);

// One candidate region's series for a given job origin: its grid intensity
// plus the transfer intensities to and from the origin (null at the origin
// itself, whose transfers are free).
struct RegionSeries {
  std::string id;
  const StepSeries* cie = nullptr;       // g/J
  const StepSeries* cidt_in = nullptr;   // origin -> region, g/Gb
  const StepSeries* cidt_out = nullptr;  // region -> origin, g/Gb
};

// f1 = CIDT_in x B + (CIE_origin + CIE_r) x P_T; f2 = CIE_r x P_C x PUE;
// f3 mirrors f1 with CIDT_out. All in g/s over [start_time, deadline].
EmissionRateFns region_rate_functions(const JobSpec& job, const RegionSeries& region,
                                      const StepSeries& origin_cie, const PowerConfig& power);

struct RegionResult {
  std::string region;
  bool feasible = false;
  std::string error;  // set when infeasible
  SchedulePlan plan;
  double ce_compute_g = 0.0;
  double ce_network_g = 0.0;   // CIDT x B part of both transfers
  double ce_endpoint_g = 0.0;  // (CIE+CIE) x P_T part of both transfers
  double ce_total_g = 0.0;
};

// Optimizes every region (the origin with zero-duration transfers) and
// sorts feasible results by total emission, ties by region id. Throws when
// no region is feasible. The job origin must appear in `regions`.
std::vector<RegionResult> best_region(const JobSpec& job,
                                      const std::vector<RegionSeries>& regions,
                                      const PowerConfig& power, int64_t quantum);

// Baselines at the origin: run at start_time, or time-shift only.
RegionResult no_shift_result(const JobSpec& job, const StepSeries& origin_cie,
                             const PowerConfig& power);
RegionResult time_only_result(const JobSpec& job, const StepSeries& origin_cie,
                              const PowerConfig& power, int64_t quantum);

struct Saving {
  double net_pct = 0.0;
  double compute_pct = 0.0;   // compute savings share
  double overhead_pct = 0.0;  // migration overhead share; net = compute - overhead
};

Saving net_saving(const RegionResult& candidate, const RegionResult& baseline);

// (input+output Gb) per kWh of compute energy.
double job_ratio(const JobSpec& job, const PowerConfig& power);

// overhead%(ratio) for the analytic curve: CIE inputs in g/kWh.
std::vector<std::pair<double, double>> migration_overhead_curve(
    const std::vector<double>& ratios_gb_per_kwh, double cidt_bar_g_per_gb,
    double cie_r_g_per_kwh, double cie_origin_g_per_kwh, const PowerConfig& power);

// Regions whose emission does not exceed the origin's (saving >= 0); the
// origin itself always qualifies.
size_t eligible_region_count(const std::vector<RegionResult>& results,
                             const std::string& origin);

enum class LbPolicy { best, random, k_random };
const char* to_string(LbPolicy p);
LbPolicy lb_policy_from_string(const std::string& s);

// Uniform draw in [0, n) by rejection; stable across platforms.
uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n);

// Picks a region among those with saving >= 0 vs the origin: the best one,
// a uniform one, or a uniform one of the k best. Falls back to the origin
// when nothing qualifies.
const RegionResult& load_balance(const std::vector<RegionResult>& results,
                                 const std::string& origin, LbPolicy policy, int64_t k,
                                 uint64_t seed);

struct SweepSample {
  int64_t t = 0;
  std::string workload;
  std::string origin;
  std::string best;
  std::string chosen;  // load-balance pick; equals best under the best policy
  double best_g = 0.0;
  double chosen_g = 0.0;
  double time_only_g = 0.0;
  double no_shift_g = 0.0;
  double saving_vs_time_pct = 0.0;
  double saving_vs_noshift_pct = 0.0;
  size_t eligible = 0;
};

struct SweepResult {
  std::vector<SweepSample> samples;  // ordered by (t, job)
  std::map<std::pair<int, std::string>, int64_t> by_hour;   // (hour-of-day, best) -> count
  std::map<std::pair<int, std::string>, int64_t> by_month;  // (month, best) -> count
};

using RegionProvider = std::function<std::vector<RegionSeries>(const std::string& origin)>;

// Re-optimizes every job at request times from..to (exclusive) in stride
// steps with a per-sample deadline of t + deadline_s, then applies the
// load-balance policy with a per-sample seed of seed ^ index. Samples run
// in parallel when threads > 1; outputs are keyed by sample index and the
// RNG never crosses samples, so the thread count cannot change the result.
SweepResult sweep(const std::vector<JobSpec>& jobs, int64_t from, int64_t to, int64_t stride,
                  int64_t deadline_s, const RegionProvider& provider, const PowerConfig& power,
                  int64_t quantum, int threads, LbPolicy policy = LbPolicy::best,
                  int64_t lb_k = 3, uint64_t seed = 0);

}  // namespace carbonshift
