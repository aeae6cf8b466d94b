#include "carbonshift/carbon.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/geo.hpp"
#include "carbonshift/numfmt.hpp"
#include "carbonshift/timeutil.hpp"

namespace carbonshift {

namespace {

std::string window_str(int64_t t0, int64_t t1) {
  return "[" + format_time8601(t0) + ", " + format_time8601(t1) + "]";
}

struct SegmentBuilder {
  std::vector<int64_t> bp;
  std::vector<double> val;
};

}  // namespace

void CieStore::add_segment(const std::string& iso, StepSeries s) {
  if (iso.empty()) throw input_error("carbon segment with empty iso id");
  if (s.empty()) throw input_error("empty carbon segment for '" + iso + "'");
  auto& vec = series_[iso];
  if (!vec.empty() && s.begin() < vec.back().end())
    throw input_error("carbon segments overlap for '" + iso + "'");
  vec.push_back(std::move(s));
}

CieStore CieStore::ingest(const std::string& path, const Config& cfg) {
  const int64_t step = cfg.get_int("carbon.step_s");
  if (step <= 0) throw input_error("carbon.step_s must be positive");

  auto rows = CsvReader::read_file(path);
  const char* header = "iso_id,timestamp_utc,carbon_intensity_g_per_kwh";
  if (rows.empty() || CsvWriter::join(rows[0].fields) != header)
    throw input_error(path + ": expected header " + header);
  if (rows.size() < 2) throw input_error(path + ": no data rows");

  CieStore store;
  std::map<std::string, SegmentBuilder> open;
  auto flush = [&store](const std::string& iso, SegmentBuilder& b) {
    if (b.bp.empty()) return;
    store.add_segment(iso, StepSeries(std::move(b.bp), std::move(b.val)));
    b = SegmentBuilder{};
  };

  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_fields(r, 3, path);
    const std::string& iso = r.fields[0];
    const std::string where = path + ":" + std::to_string(r.line_no);
    if (iso.empty()) throw input_error(where + ": empty iso id");
    int64_t ts = 0;
    double gkwh = 0.0;
    try {
      ts = parse_time8601(r.fields[1]);
      gkwh = parse_double(r.fields[2]);
    } catch (const input_error& e) {
      throw input_error(where + ": " + e.what());
    }
    if (gkwh < 0.0) throw input_error(where + ": negative carbon intensity for '" + iso + "'");

    auto& b = open[iso];
    const double gj = gkwh / kJoulesPerKwh;
    if (b.bp.empty()) {
      b.bp = {ts, ts + step};
      b.val = {gj};
      continue;
    }
    const int64_t last_start = b.bp[b.bp.size() - 2];
    const int64_t next = b.bp.back();
    if (ts == last_start) throw input_error(where + ": duplicate timestamp for '" + iso + "'");
    if (ts < last_start) throw input_error(where + ": timestamps for '" + iso + "' not ascending");
    if (ts < next) throw input_error(where + ": timestamp overlaps previous step for '" + iso + "'");
    if (ts == next) {
      b.bp.push_back(ts + step);
      b.val.push_back(gj);
    } else {  // gap: close the running segment, start a fresh one
      flush(iso, b);
      b.bp = {ts, ts + step};
      b.val = {gj};
    }
  }
  for (auto& [iso, b] : open) flush(iso, b);
  return store;
}

const std::vector<StepSeries>& CieStore::segments(const std::string& iso) const {
  auto it = series_.find(iso);
  if (it == series_.end()) throw input_error("no carbon data for '" + iso + "'");
  return it->second;
}

const StepSeries& CieStore::series_for(const std::string& iso, int64_t t0, int64_t t1) const {
  if (t1 < t0) throw input_error("carbon window end before start");
  for (const auto& s : segments(iso))
    if (s.covers(t0, t1)) return s;
  throw input_error("carbon data for '" + iso + "' does not cover " + window_str(t0, t1));
}

bool CieStore::covers(const std::string& iso, int64_t t0, int64_t t1) const {
  auto it = series_.find(iso);
  if (it == series_.end()) return false;
  for (const auto& s : it->second)
    if (s.covers(t0, t1)) return true;
  return false;
}

std::vector<std::string> CieStore::isos() const {
  std::vector<std::string> out;
  out.reserve(series_.size());
  for (const auto& [iso, _] : series_) out.push_back(iso);
  return out;
}

CieStore CieStore::without(const std::set<std::string>& hidden) const {
  CieStore out;
  for (const auto& [iso, segs] : series_)
    if (!hidden.count(iso)) out.series_[iso] = segs;
  return out;
}

CoverageReport coverage(const DeviceChain& chain, const CieStore& store, int64_t t0, int64_t t1) {
  if (chain.devices.empty()) throw input_error("coverage of an empty device chain");
  if (t1 < t0) throw input_error("carbon window end before start");
  CoverageReport rep;
  rep.covered.reserve(chain.devices.size());
  for (const auto& d : chain.devices) {
    const double power = d.ie_w_per_gbps * d.submarine_scale;
    const bool ok = !d.iso.empty() && store.covers(d.iso, t0, t1);
    rep.total_power_w += power;
    if (ok) rep.covered_power_w += power;
    rep.covered.push_back(ok);
  }
  rep.ratio = rep.total_power_w > 0.0 ? rep.covered_power_w / rep.total_power_w : 0.0;
  return rep;
}

const char* to_string(EstimationPolicy p) {
  switch (p) {
    case EstimationPolicy::route_average: return "route_average";
    case EstimationPolicy::nearest_neighbor: return "nearest_neighbor";
    case EstimationPolicy::none: return "none";
  }
  throw internal_error("bad estimation policy");
}

EstimationPolicy estimation_from_string(const std::string& s) {
  if (s == "route_average") return EstimationPolicy::route_average;
  if (s == "nearest_neighbor") return EstimationPolicy::nearest_neighbor;
  if (s == "none") return EstimationPolicy::none;
  throw input_error("unknown estimation policy '" + s +
                    "' (expected route_average, nearest_neighbor or none)");
}

ResolvedChain resolve_chain(const DeviceChain& chain, const CieStore& store, const Config& cfg,
                            int64_t t0, int64_t t1) {
  ResolvedChain rc;
  rc.policy = estimation_from_string(cfg.get("carbon.estimation"));
  rc.cov = coverage(chain, store, t0, t1);
  const double cutoff = cfg.get_double("carbon.cutoff");

  const size_t n = chain.devices.size();
  if (rc.policy == EstimationPolicy::none) {
    if (rc.cov.covered_power_w != rc.cov.total_power_w)
      throw below_cutoff_error("carbon coverage " + format_double(rc.cov.ratio) +
                                   " incomplete with estimation disabled",
                               rc.cov.ratio);
  } else if (rc.cov.ratio < cutoff) {
    throw below_cutoff_error("carbon coverage " + format_double(rc.cov.ratio) +
                                 " below cutoff " + format_double(cutoff),
                             rc.cov.ratio);
  }
  if (rc.cov.covered_power_w <= 0.0)
    throw below_cutoff_error("no device on the route has carbon data", rc.cov.ratio);

  rc.series.assign(n, nullptr);
  rc.iso_used.assign(n, "");
  for (size_t i = 0; i < n; ++i)
    if (rc.cov.covered[i]) {
      rc.series[i] = &store.series_for(chain.devices[i].iso, t0, t1);
      rc.iso_used[i] = chain.devices[i].iso;
    }

  switch (rc.policy) {
    case EstimationPolicy::none:
      break;  // full coverage enforced above
    case EstimationPolicy::route_average:
      // Uncovered devices stay excluded; scaling the covered power up to the
      // chain total attributes the route's average intensity to them. At full
      // coverage the two sums are the same fold, so the multiplier is 1.
      rc.power_multiplier = rc.cov.total_power_w / rc.cov.covered_power_w;
      break;
    case EstimationPolicy::nearest_neighbor:
      for (size_t i = 0; i < n; ++i) {
        if (rc.series[i]) continue;
        double best = std::numeric_limits<double>::infinity();
        size_t pick = n;
        for (size_t j = 0; j < n; ++j) {
          if (!rc.cov.covered[j]) continue;
          double d = haversine_km(chain.devices[i].location, chain.devices[j].location);
          if (d < best) {
            best = d;
            pick = j;
          }
        }
        rc.series[i] = rc.series[pick];
        rc.iso_used[i] = rc.iso_used[pick];
      }
      break;
  }
  return rc;
}

}  // namespace carbonshift
