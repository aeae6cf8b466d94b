#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "carbonshift/config.hpp"
#include "carbonshift/devices.hpp"
#include "carbonshift/step_series.hpp"

namespace carbonshift {

// Carbon-intensity series per ISO. Values are stored in g/J (inputs are
// g/kWh); a gap in the input splits the ISO's data into separate segments,
// and windows that straddle a gap are errors rather than interpolations.
class CieStore {
 public:
  static CieStore ingest(const std::string& path, const Config& cfg);

  bool has(const std::string& iso) const { return series_.count(iso) != 0; }
  const std::vector<StepSeries>& segments(const std::string& iso) const;
  // The segment covering [t0, t1]; throws when none does.
  const StepSeries& series_for(const std::string& iso, int64_t t0, int64_t t1) const;
  bool covers(const std::string& iso, int64_t t0, int64_t t1) const;
  std::vector<std::string> isos() const;

  // Copy with some ISOs hidden: the estimation-evaluation harness.
  CieStore without(const std::set<std::string>& hidden) const;

  void add_segment(const std::string& iso, StepSeries s);  // ingestion + tests

 private:
  std::map<std::string, std::vector<StepSeries>> series_;
};

inline constexpr double kJoulesPerKwh = 3.6e6;

struct CoverageReport {
  double covered_power_w = 0.0;
  double total_power_w = 0.0;
  double ratio = 0.0;
  std::vector<bool> covered;  // aligned with chain.devices
};

// Power-weighted data coverage of a chain over a query window. A device
// counts as covered when its ISO has an unbroken series across the window.
CoverageReport coverage(const DeviceChain& chain, const CieStore& store, int64_t t0, int64_t t1);

enum class EstimationPolicy { route_average, nearest_neighbor, none };
const char* to_string(EstimationPolicy p);
EstimationPolicy estimation_from_string(const std::string& s);

// Per-device CIE assignment after the estimation heuristic ran. Devices
// with a null series are excluded from the sum and compensated for by the
// power multiplier (route-average scaling). iso_used names the zone whose
// series each device ended up with ("" where dropped).
struct ResolvedChain {
  std::vector<const StepSeries*> series;
  std::vector<std::string> iso_used;
  double power_multiplier = 1.0;
  CoverageReport cov;
  EstimationPolicy policy = EstimationPolicy::route_average;
};

// Applies carbon.estimation/carbon.cutoff; throws below_cutoff_error when
// the coverage ratio falls under the cutoff (or under 1.0 for policy none).
// The result points into the store, which must outlive it.
ResolvedChain resolve_chain(const DeviceChain& chain, const CieStore& store, const Config& cfg,
                            int64_t t0, int64_t t1);
ResolvedChain resolve_chain(const DeviceChain&, CieStore&&, const Config&, int64_t,
                            int64_t) = delete;

}  // namespace carbonshift
