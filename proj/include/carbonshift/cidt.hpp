#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carbonshift/carbon.hpp"
#include "carbonshift/config.hpp"
#include "carbonshift/devices.hpp"
#include "carbonshift/routes.hpp"
#include "carbonshift/step_series.hpp"

namespace carbonshift {

// Carbon intensity of data transfer along one route, g/Gb, piecewise
// constant on the union grid of the contributing CIE series.
struct CidtSeries {
  std::string route;
  StepSeries series;
  EstimationPolicy policy = EstimationPolicy::route_average;
  double coverage_ratio = 1.0;
  double power_multiplier = 1.0;
};

// CIDT(t) = pue × redundancy × Σ_d (IE_d × scale_d) × CIE_{iso(d)}(t).
// Devices are folded per zone in sorted order, so any two chains with the
// same device multiset produce bit-identical series.
CidtSeries cidt(const DeviceChain& chain, const CieStore& store, const Config& cfg, int64_t t0,
                int64_t t1);

// Expands the route oriented by its canonical direction (smaller region key
// first) so that a->b and b->a share one device chain, then labels the
// result with the requested direction.
CidtSeries route_cidt(const PhysicalRoute& route, const DevicePowerTable& powers,
                      const IsoMap& isos, const CieStore& store, const Config& cfg, int64_t t0,
                      int64_t t1);

struct CidtStat {
  std::string route;
  double mean_g_per_gb = 0.0;
  double median_g_per_gb = 0.0;
};

// Per-route time means/medians plus percentiles of the means across routes.
struct CidtSummary {
  std::vector<CidtStat> rows;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
};

CidtSummary cidt_stats(const std::vector<CidtSeries>& all);

// `route_id,t,cidt_g_per_gb` rows under the config echo header.
std::string cidt_series_csv(const std::vector<CidtSeries>& all, const Config& cfg);
// `route_id,mean,median` rows; aggregate percentiles as comment lines.
std::string cidt_stats_csv(const CidtSummary& summary, const Config& cfg);

}  // namespace carbonshift
