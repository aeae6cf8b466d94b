#include "carbonshift/cidt.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/timeutil.hpp"

namespace carbonshift {

CidtSeries cidt(const DeviceChain& chain, const CieStore& store, const Config& cfg, int64_t t0,
                int64_t t1) {
  const double pue = cfg.get_double("cidt.pue");
  const double redundancy = cfg.get_double("cidt.redundancy");
  if (pue <= 0.0 || redundancy <= 0.0)
    throw input_error("cidt.pue and cidt.redundancy must be positive");

  ResolvedChain rc = resolve_chain(chain, store, cfg, t0, t1);

  // Zone-keyed weight groups, each sorted ascending before folding: the sum
  // then depends only on the device multiset, not the chain direction.
  std::map<std::string, std::pair<std::vector<double>, const StepSeries*>> groups;
  for (size_t i = 0; i < chain.devices.size(); ++i) {
    if (!rc.series[i]) continue;
    const Device& d = chain.devices[i];
    auto& g = groups[rc.iso_used[i]];
    g.first.push_back(d.ie_w_per_gbps * d.submarine_scale);
    g.second = rc.series[i];
  }

  std::vector<std::pair<double, const StepSeries*>> terms;
  terms.reserve(groups.size());
  for (auto& [iso, g] : groups) {
    std::sort(g.first.begin(), g.first.end());
    double w = 0.0;
    for (double v : g.first) w += v;
    terms.emplace_back(w, g.second);
  }

  CidtSeries out;
  out.route = chain.route;
  out.policy = rc.policy;
  out.coverage_ratio = rc.cov.ratio;
  out.power_multiplier = rc.power_multiplier;
  const double factor = pue * redundancy * rc.power_multiplier;
  out.series = StepSeries::weighted_sum(terms, t0, t1).scaled(factor);
  return out;
}

CidtSeries route_cidt(const PhysicalRoute& route, const DevicePowerTable& powers,
                      const IsoMap& isos, const CieStore& store, const Config& cfg, int64_t t0,
                      int64_t t1) {
  const bool flip = route.dst < route.src;
  DeviceChain chain = expand(flip ? reversed(route) : route, powers, isos, cfg);
  CidtSeries out = cidt(chain, store, cfg, t0, t1);
  out.route = route_id(route);
  return out;
}

CidtSummary cidt_stats(const std::vector<CidtSeries>& all) {
  if (all.empty()) throw input_error("cidt stats over an empty route set");
  CidtSummary sum;
  std::vector<double> means;
  means.reserve(all.size());
  for (const auto& c : all) {
    CidtStat st;
    st.route = c.route;
    st.mean_g_per_gb = time_mean(c.series);
    st.median_g_per_gb = time_median(c.series);
    sum.rows.push_back(std::move(st));
    means.push_back(sum.rows.back().mean_g_per_gb);
  }
  sum.p25 = percentile(means, 25.0);
  sum.p50 = percentile(means, 50.0);
  sum.p75 = percentile(means, 75.0);
  return sum;
}

std::string cidt_series_csv(const std::vector<CidtSeries>& all, const Config& cfg) {
  std::string out = cfg.echo_header();
  out += "route_id,t,cidt_g_per_gb\n";
  for (const auto& c : all) {
    const auto& bp = c.series.breakpoints();
    const auto& val = c.series.values();
    for (size_t i = 0; i < val.size(); ++i)
      out += c.route + "," + format_time8601(bp[i]) + "," + format_double(val[i]) + "\n";
  }
  return out;
}

std::string cidt_stats_csv(const CidtSummary& summary, const Config& cfg) {
  std::string out = cfg.echo_header();
  out += "# p25_mean_g_per_gb=" + format_double(summary.p25) + "\n";
  out += "# p50_mean_g_per_gb=" + format_double(summary.p50) + "\n";
  out += "# p75_mean_g_per_gb=" + format_double(summary.p75) + "\n";
  out += "route_id,mean,median\n";
  for (const auto& r : summary.rows)
    out += r.route + "," + format_double(r.mean_g_per_gb) + "," +
           format_double(r.median_g_per_gb) + "\n";
  return out;
}

}  // namespace carbonshift
