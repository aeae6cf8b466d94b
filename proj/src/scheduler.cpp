#include "carbonshift/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "carbonshift/carbon.hpp"
#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/timeutil.hpp"

namespace carbonshift {

PowerConfig PowerConfig::from_config(const Config& cfg) {
  PowerConfig p;
  p.watts_per_core = cfg.get_double("power.watts_per_core");
  p.server_power_w = cfg.get_double("power.server_power_w");
  p.transfer_share = cfg.get_double("power.transfer_share");
  p.pue_dc = cfg.get_double("power.pue_dc");
  p.bandwidth_gbps = cfg.get_double("power.bandwidth_gbps");
  if (p.watts_per_core <= 0 || p.server_power_w <= 0 || p.pue_dc <= 0 ||
      p.bandwidth_gbps <= 0) {
    throw input_error("power settings must be positive");
  }
  // share 0 disables endpoint power; anything negative is a typo
  if (p.transfer_share < 0) throw input_error("power.transfer_share must be >= 0");
  return p;
}

std::vector<Workload> load_workloads(const std::string& path) {
  const auto rows = CsvReader::read_file(path);
  if (rows.empty() || CsvWriter::join(rows[0].fields) != "name,cores,runtime_h,input_gb,output_gb") {
    throw input_error(path + ": expected header name,cores,runtime_h,input_gb,output_gb");
  }
  if (rows.size() < 2) throw input_error(path + ": no workload rows");
  std::vector<Workload> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    require_fields(row, 5, path);
    const std::string where = path + ":" + std::to_string(row.line_no);
    Workload w;
    w.name = row.fields[0];
    if (w.name.empty()) throw input_error(where + ": empty workload name");
    try {
      w.cores = parse_int64(row.fields[1]);
      w.runtime_h = parse_double(row.fields[2]);
      w.input_gb = parse_double(row.fields[3]);
      w.output_gb = parse_double(row.fields[4]);
    } catch (const input_error& e) {
      throw input_error(where + ": " + e.what());
    }
    if (w.cores <= 0) throw input_error(where + ": cores must be positive");
    if (w.runtime_h <= 0) throw input_error(where + ": runtime must be positive");
    if (w.input_gb < 0 || w.output_gb < 0) throw input_error(where + ": sizes must be >= 0");
    out.push_back(std::move(w));
  }
  return out;
}

JobSpec make_job(const Workload& w, const std::string& origin, int64_t start_time,
                 int64_t deadline) {
  if (deadline <= start_time) {
    throw input_error("job '" + w.name + "': deadline must fall after the start time");
  }
  JobSpec job;
  job.name = w.name;
  job.core_count = w.cores;
  job.runtime_s = std::llround(w.runtime_h * 3600.0);
  job.start_time = start_time;
  job.deadline = deadline;
  job.input_gbit = w.input_gb * 8.0;  // gigabytes on disk, gigabits on the wire
  job.output_gbit = w.output_gb * 8.0;
  job.origin = origin;
  return job;
}

namespace {

double compute_power_w(const JobSpec& job, const PowerConfig& power) {
  return static_cast<double>(job.core_count) * power.watts_per_core * power.pue_dc;
}

void check_job(const JobSpec& job) {
  if (job.deadline <= job.start_time) {
    throw input_error("job '" + job.name + "': deadline must fall after the start time");
  }
  if (job.core_count <= 0) throw input_error("job '" + job.name + "': cores must be positive");
  if (job.runtime_s < 0) throw input_error("job '" + job.name + "': negative runtime");
  if (job.input_gbit < 0 || job.output_gbit < 0) {
    throw input_error("job '" + job.name + "': negative transfer size");
  }
}

}  // namespace

EmissionRateFns region_rate_functions(const JobSpec& job, const RegionSeries& region,
                                      const StepSeries& origin_cie, const PowerConfig& power) {
  check_job(job);
  if (power.bandwidth_gbps <= 0) throw input_error("bandwidth must be positive");
  if (!region.cie) throw input_error("region '" + region.id + "' has no carbon series");

  EmissionRateFns e;
  e.T0 = job.start_time;
  e.T4 = job.deadline;
  e.D2 = job.runtime_s;
  e.f2 = StepSeries::weighted_sum({{compute_power_w(job, power), region.cie}}, e.T0, e.T4);

  if (region.id == job.origin) {
    e.D1 = 0;
    e.D3 = 0;
    e.f1 = StepSeries::constant(e.T0, e.T4, 0.0);
    e.f3 = e.f1;
    return e;
  }
  if (!region.cidt_in || !region.cidt_out) {
    throw input_error("region '" + region.id + "' has no transfer series for origin '" +
                      job.origin + "'");
  }
  e.D1 = std::llround(job.input_gbit / power.bandwidth_gbps);
  e.D3 = std::llround(job.output_gbit / power.bandwidth_gbps);
  const double pt = power.transfer_power_w();
  const double b = power.bandwidth_gbps;
  e.f1 = StepSeries::weighted_sum(
      {{b, region.cidt_in}, {pt, &origin_cie}, {pt, region.cie}}, e.T0, e.T4);
  e.f3 = StepSeries::weighted_sum(
      {{b, region.cidt_out}, {pt, &origin_cie}, {pt, region.cie}}, e.T0, e.T4);
  return e;
}

std::vector<RegionResult> best_region(const JobSpec& job,
                                      const std::vector<RegionSeries>& regions,
                                      const PowerConfig& power, int64_t quantum) {
  if (regions.empty()) throw input_error("no candidate regions");
  const RegionSeries* origin = nullptr;
  for (const auto& r : regions) {
    if (r.id == job.origin) {
      origin = &r;
      break;
    }
  }
  if (!origin) throw input_error("origin region '" + job.origin + "' not among candidates");
  if (!origin->cie) throw input_error("origin region '" + job.origin + "' has no carbon series");
  const StepSeries& origin_cie = *origin->cie;

  std::vector<RegionResult> out;
  out.reserve(regions.size());
  for (const auto& r : regions) {
    RegionResult res;
    res.region = r.id;
    try {
      const EmissionRateFns e = region_rate_functions(job, r, origin_cie, power);
      res.plan = optimize(e, quantum);
      res.feasible = true;
      res.ce_compute_g = res.plan.compute_g;
      res.ce_total_g = res.plan.total_g;
      if (r.id != job.origin) {
        // Split each transfer into its wire and endpoint parts. The plan's
        // input_g/output_g integrate the combined rate, so the split only
        // matches the total to rounding, which is all the reports need.
        const StepSeries wire_in =
            StepSeries::weighted_sum({{power.bandwidth_gbps, r.cidt_in}}, e.T0, e.T4);
        const StepSeries wire_out =
            StepSeries::weighted_sum({{power.bandwidth_gbps, r.cidt_out}}, e.T0, e.T4);
        const double pt = power.transfer_power_w();
        const StepSeries ends =
            StepSeries::weighted_sum({{pt, &origin_cie}, {pt, r.cie}}, e.T0, e.T4);
        res.ce_network_g = wire_in.window_integral(res.plan.t1, e.D1) +
                           wire_out.window_integral(res.plan.t3, e.D3);
        res.ce_endpoint_g = ends.window_integral(res.plan.t1, e.D1) +
                            ends.window_integral(res.plan.t3, e.D3);
      }
    } catch (const infeasible_error& ex) {
      res.feasible = false;
      res.error = ex.what();
    }
    out.push_back(std::move(res));
  }
  std::sort(out.begin(), out.end(), [](const RegionResult& a, const RegionResult& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (a.feasible && a.ce_total_g != b.ce_total_g) return a.ce_total_g < b.ce_total_g;
    return a.region < b.region;
  });
  if (!out.front().feasible) {
    throw infeasible_error("no feasible region for job '" + job.name + "'");
  }
  return out;
}

RegionResult no_shift_result(const JobSpec& job, const StepSeries& origin_cie,
                             const PowerConfig& power) {
  check_job(job);
  RegionResult res;
  res.region = job.origin;
  if (job.start_time + job.runtime_s > job.deadline) {
    res.error = "job '" + job.name + "' cannot finish by its deadline without shifting";
    return res;
  }
  const StepSeries f2 = StepSeries::weighted_sum({{compute_power_w(job, power), &origin_cie}},
                                                 job.start_time, job.deadline);
  res.feasible = true;
  res.plan.t1 = job.start_time;
  res.plan.t2 = job.start_time;
  res.plan.t3 = job.start_time + job.runtime_s;
  res.plan.compute_g = f2.window_integral(job.start_time, job.runtime_s);
  res.plan.total_g = (0.0 + res.plan.compute_g) + 0.0;  // the optimizer's fold
  res.ce_compute_g = res.plan.compute_g;
  res.ce_total_g = res.plan.total_g;
  return res;
}

RegionResult time_only_result(const JobSpec& job, const StepSeries& origin_cie,
                              const PowerConfig& power, int64_t quantum) {
  check_job(job);
  const StepSeries f2 = StepSeries::weighted_sum({{compute_power_w(job, power), &origin_cie}},
                                                 job.start_time, job.deadline);
  RegionResult res;
  res.region = job.origin;
  const auto [t2, g] = optimize_compute_only(f2, job.start_time, job.deadline, job.runtime_s,
                                             quantum);
  res.feasible = true;
  res.plan.t1 = t2;
  res.plan.t2 = t2;
  res.plan.t3 = t2 + job.runtime_s;
  res.plan.compute_g = g;
  res.plan.total_g = (0.0 + g) + 0.0;
  res.ce_compute_g = g;
  res.ce_total_g = res.plan.total_g;
  return res;
}

Saving net_saving(const RegionResult& candidate, const RegionResult& baseline) {
  if (!baseline.feasible) throw input_error("savings baseline is infeasible");
  if (!(baseline.ce_total_g > 0)) throw input_error("savings baseline emission must be positive");
  if (!candidate.feasible) {
    throw input_error("region '" + candidate.region + "' is infeasible; no savings defined");
  }
  Saving s;
  s.net_pct = (baseline.ce_total_g - candidate.ce_total_g) / baseline.ce_total_g * 100.0;
  s.compute_pct =
      (baseline.ce_total_g - candidate.ce_compute_g) / baseline.ce_total_g * 100.0;
  s.overhead_pct =
      (candidate.ce_network_g + candidate.ce_endpoint_g) / baseline.ce_total_g * 100.0;
  return s;
}

double job_ratio(const JobSpec& job, const PowerConfig& power) {
  if (job.core_count <= 0 || job.runtime_s <= 0) {
    throw input_error("job ratio needs positive cores and runtime");
  }
  const double kwh = static_cast<double>(job.core_count) * power.watts_per_core *
                     static_cast<double>(job.runtime_s) / kJoulesPerKwh;
  if (!(kwh > 0)) throw input_error("job ratio needs positive compute energy");
  return (job.input_gbit + job.output_gbit) / kwh;
}

std::vector<std::pair<double, double>> migration_overhead_curve(
    const std::vector<double>& ratios_gb_per_kwh, double cidt_bar_g_per_gb,
    double cie_r_g_per_kwh, double cie_origin_g_per_kwh, const PowerConfig& power) {
  if (!(cie_origin_g_per_kwh > 0)) throw input_error("origin intensity must be positive");
  if (cidt_bar_g_per_gb < 0 || cie_r_g_per_kwh < 0) {
    throw input_error("intensities must be >= 0");
  }
  if (power.bandwidth_gbps <= 0) throw input_error("bandwidth must be positive");
  // grams moved per gigabit: the wire itself plus endpoint power at both ends
  const double per_gb = cidt_bar_g_per_gb + power.transfer_power_w() / power.bandwidth_gbps /
                                                kJoulesPerKwh *
                                                (cie_r_g_per_kwh + cie_origin_g_per_kwh);
  std::vector<std::pair<double, double>> out;
  out.reserve(ratios_gb_per_kwh.size());
  for (double r : ratios_gb_per_kwh) {
    if (r < 0) throw input_error("ratios must be >= 0");
    out.emplace_back(r, r * per_gb / cie_origin_g_per_kwh * 100.0);
  }
  return out;
}

namespace {

const RegionResult* find_region(const std::vector<RegionResult>& results,
                                const std::string& id) {
  for (const auto& r : results) {
    if (r.region == id) return &r;
  }
  return nullptr;
}

}  // namespace

size_t eligible_region_count(const std::vector<RegionResult>& results,
                             const std::string& origin) {
  const RegionResult* o = find_region(results, origin);
  if (!o || !o->feasible) return 0;
  size_t n = 0;
  for (const auto& r : results) {
    if (r.feasible && r.ce_total_g <= o->ce_total_g) ++n;
  }
  return n;
}

const char* to_string(LbPolicy p) {
  switch (p) {
    case LbPolicy::best: return "best";
    case LbPolicy::random: return "random";
    case LbPolicy::k_random: return "k-random";
  }
  return "best";
}

LbPolicy lb_policy_from_string(const std::string& s) {
  if (s == "best") return LbPolicy::best;
  if (s == "random") return LbPolicy::random;
  if (s == "k-random" || s == "k_random") return LbPolicy::k_random;
  throw input_error("unknown load-balance policy '" + s + "'");
}

uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) throw input_error("cannot draw from an empty set");
  const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;  // largest multiple of n
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

const RegionResult& load_balance(const std::vector<RegionResult>& results,
                                 const std::string& origin, LbPolicy policy, int64_t k,
                                 uint64_t seed) {
  const RegionResult* o = find_region(results, origin);
  if (!o) throw input_error("origin region '" + origin + "' missing from results");
  if (!o->feasible) return *o;  // nothing qualifies; stay home

  std::vector<const RegionResult*> eligible;
  for (const auto& r : results) {
    if (r.feasible && r.ce_total_g <= o->ce_total_g) eligible.push_back(&r);
  }
  std::sort(eligible.begin(), eligible.end(), [](const RegionResult* a, const RegionResult* b) {
    if (a->ce_total_g != b->ce_total_g) return a->ce_total_g < b->ce_total_g;
    return a->region < b->region;
  });
  if (eligible.empty()) return *o;
  if (policy == LbPolicy::best) return *eligible.front();
  if (policy == LbPolicy::k_random) {
    if (k <= 0) throw input_error("load-balance k must be positive");
    eligible.resize(std::min<size_t>(eligible.size(), static_cast<size_t>(k)));
  }
  std::mt19937_64 rng(seed);
  return *eligible[bounded_draw(rng, eligible.size())];
}

SweepResult sweep(const std::vector<JobSpec>& jobs, int64_t from, int64_t to, int64_t stride,
                  int64_t deadline_s, const RegionProvider& provider, const PowerConfig& power,
                  int64_t quantum, int threads, LbPolicy policy, int64_t lb_k, uint64_t seed) {
  if (jobs.empty()) throw input_error("no jobs to sweep");
  if (stride <= 0) throw input_error("sweep stride must be positive");
  if (to <= from) throw input_error("sweep range is empty");
  if (deadline_s <= 0) throw input_error("sweep deadline must be positive");

  std::vector<int64_t> times;
  for (int64_t t = from; t < to; t += stride) times.push_back(t);
  const size_t total = times.size() * jobs.size();
  std::vector<SweepSample> samples(total);

  auto run_one = [&](size_t idx) {
    JobSpec job = jobs[idx % jobs.size()];
    job.start_time = times[idx / jobs.size()];
    job.deadline = job.start_time + deadline_s;
    const std::vector<RegionSeries> regions = provider(job.origin);
    const RegionSeries* origin = nullptr;
    for (const auto& r : regions) {
      if (r.id == job.origin) {
        origin = &r;
        break;
      }
    }
    if (!origin || !origin->cie) {
      throw input_error("origin region '" + job.origin + "' has no carbon series");
    }
    const auto results = best_region(job, regions, power, quantum);
    const RegionResult& best = results.front();
    const RegionResult& picked =
        load_balance(results, job.origin, policy, lb_k, seed ^ static_cast<uint64_t>(idx));
    const RegionResult baseline = no_shift_result(job, *origin->cie, power);
    if (!baseline.feasible) {
      throw infeasible_error("job '" + job.name + "' at " + format_time8601(job.start_time) +
                             ": " + baseline.error);
    }
    const RegionResult shifted = time_only_result(job, *origin->cie, power, quantum);

    SweepSample s;
    s.t = job.start_time;
    s.workload = job.name;
    s.origin = job.origin;
    s.best = best.region;
    s.chosen = picked.region;
    s.best_g = best.ce_total_g;
    s.chosen_g = picked.ce_total_g;
    s.time_only_g = shifted.ce_total_g;
    s.no_shift_g = baseline.ce_total_g;
    s.saving_vs_time_pct = net_saving(best, shifted).net_pct;
    s.saving_vs_noshift_pct = net_saving(best, baseline).net_pct;
    s.eligible = eligible_region_count(results, job.origin);
    samples[idx] = std::move(s);
  };

  if (threads <= 1 || total == 1) {
    for (size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::atomic<bool> bail{false};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
      while (!bail.load(std::memory_order_relaxed)) {
        const size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= total) return;
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          bail.store(true, std::memory_order_relaxed);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const size_t n = std::min<size_t>(static_cast<size_t>(threads), total);
    pool.reserve(n);
    for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  SweepResult out;
  out.samples = std::move(samples);
  for (const auto& s : out.samples) {
    ++out.by_hour[{hour_of_day_utc(s.t), s.best}];
    ++out.by_month[{month_utc(s.t), s.best}];
  }
  return out;
}

}  // namespace carbonshift
