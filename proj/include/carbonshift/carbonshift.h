#ifndef CARBONSHIFT_H
#define CARBONSHIFT_H

/* C interface of the carbonshift shared library.
 *
 * Every command returns a status code; 0 means success. On failure
 * cs_last_error() carries a message, and after any call cs_last_warnings()
 * carries newline-joined non-fatal diagnostics. Both are thread-local and
 * reset by the next call on the same thread. Paths name CSV files in the
 * formats described in docs/formats.md; empty output paths skip that file.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CS_OK = 0,
  CS_INFEASIBLE = 1, /* no feasible schedule / empty result */
  CS_INPUT = 2,      /* malformed file, unknown key, bad argument */
  CS_INTERNAL = 3    /* invariant violation; report a bug */
};

const char* cs_version(void);
const char* cs_last_error(void);
const char* cs_last_warnings(void);

/* Flat key=value configuration; unknown keys are rejected. */
typedef struct cs_config cs_config;
cs_config* cs_config_new(void);
void cs_config_free(cs_config* cfg);
int cs_config_set(cs_config* cfg, const char* key, const char* value);
int cs_config_load_file(cs_config* cfg, const char* path);
int cs_config_load_env(cs_config* cfg); /* honors CARBONSHIFT_CONFIG if set */

/* Bundle of input files shared by the scheduling commands.
 * Keys: nodes, fibers, waypoints, isos, device_power, cie, method.
 * "method" selects route inference: traceroute, endpoints, endpoints-pops,
 * waypoints, waypoints-pops (dataset source strings also accepted).
 */
typedef struct cs_dataset cs_dataset;
cs_dataset* cs_dataset_new(void);
void cs_dataset_free(cs_dataset* ds);
int cs_dataset_set(cs_dataset* ds, const char* key, const char* value);

/* "YYYY-MM-DDTHH:MM:SSZ" (UTC) <-> unix epoch seconds. */
int cs_parse_time(const char* iso8601_utc, long long* epoch_s);
int cs_format_time(long long epoch_s, char* buf, size_t cap);

/* Builds the fiber graph, taps regions (and PoPs unless tap_pops is 0),
 * and writes a deterministic snapshot. */
int cs_build_graph(const cs_config* cfg, const char* nodes_csv, const char* fibers_csv,
                   int tap_pops, const char* out_path);

/* Infers one route per pair in pairs_csv with the given method and writes
 * the route dataset. Unusable pairs are skipped with a warning unless
 * strict is nonzero. */
int cs_routes(const cs_config* cfg, const cs_dataset* ds, const char* pairs_csv,
              const char* method, int strict, const char* out_csv, size_t* written);

/* Transfer-intensity series and per-route stats over [t0, t1) for every
 * route in routes_csv. */
int cs_cidt(const cs_config* cfg, const cs_dataset* ds, const char* routes_csv,
            long long t0, long long t1, const char* out_series_csv,
            const char* out_stats_csv, size_t* written, size_t* skipped);

/* Ranks every region for one job; writes the per-region plan table and
 * reports the winner. best_region must hold best_region_cap bytes. */
int cs_optimize(const cs_config* cfg, const cs_dataset* ds, const char* origin,
                long long start_time, long long deadline, long long cores,
                double runtime_h, double input_gb, double output_gb,
                const char* out_csv, char* best_region, size_t best_region_cap,
                double* best_total_g);

/* Re-optimizes every workload at request times from..to (exclusive) in
 * stride steps, each with deadline request+deadline_s. policy is one of
 * best, random, k-random; seed feeds the per-sample pick. */
int cs_sweep(const cs_config* cfg, const cs_dataset* ds, const char* workloads_csv,
             const char* origin, long long from, long long to, long long stride,
             long long deadline_s, const char* policy, unsigned long long seed,
             const char* out_samples_csv, const char* out_hist_csv, size_t* samples);

/* Same grid as cs_sweep; reports the policy's picks against the per-sample
 * best. */
int cs_loadbalance(const cs_config* cfg, const cs_dataset* ds, const char* workloads_csv,
                   const char* origin, long long from, long long to, long long stride,
                   long long deadline_s, const char* policy, unsigned long long seed,
                   const char* out_csv, double* mean_chosen_g, double* mean_best_g);

/* Analytic migration-overhead curve over an evenly spaced ratio grid. */
int cs_overhead_curve(const cs_config* cfg, double ratio_max, int steps,
                      double cidt_mean_g_per_gb, double cie_remote_g_per_kwh,
                      double cie_origin_g_per_kwh, const char* out_csv);

/* Hide-and-restore evaluation of the estimation policy. hidden_isos is a
 * comma-separated zone list (may be empty). */
int cs_estimate_eval(const cs_config* cfg, const char* routes_csv,
                     const char* device_power_csv, const char* isos_csv,
                     const char* cie_csv, const char* hidden_isos, long long t0,
                     long long t1, const char* out_csv, size_t* rows, size_t* rejected,
                     double* mean_error_pct);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CARBONSHIFT_H */
