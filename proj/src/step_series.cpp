#include "carbonshift/step_series.hpp"

#include <algorithm>
#include <cmath>

#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"

namespace carbonshift {

StepSeries::StepSeries(std::vector<int64_t> breakpoints, std::vector<double> values)
    : bp_(std::move(breakpoints)), val_(std::move(values)) {
  if (bp_.size() < 2) throw input_error("step series needs at least 2 breakpoints");
  if (val_.size() + 1 != bp_.size())
    throw input_error("step series needs exactly |breakpoints|-1 values");
  for (size_t i = 1; i < bp_.size(); ++i)
    if (bp_[i] <= bp_[i - 1])
      throw input_error("step series breakpoints must be strictly increasing");
  for (double v : val_)
    if (!std::isfinite(v)) throw input_error("step series value not finite");
  build_prefix();
}

StepSeries StepSeries::constant(int64_t begin, int64_t end, double value) {
  return StepSeries({begin, end}, {value});
}

void StepSeries::build_prefix() {
  // Fixed-point quantum sized so the full-domain integral stays within
  // 2^52 quanta; rates are rounded to whole quanta per second. The rounding
  // error this adds is of the same order as plain double accumulation, but
  // integral arithmetic becomes exact integer arithmetic.
  double bound = 0.0;
  for (size_t i = 0; i + 1 < bp_.size(); ++i)
    bound += std::abs(val_[i]) * static_cast<double>(bp_[i + 1] - bp_[i]);
  quantum_ = bound > 0.0 ? std::ldexp(1.0, std::ilogb(bound) - 51) : 1.0;
  rcount_.assign(val_.size(), 0);
  pcount_.assign(bp_.size(), 0);
  for (size_t i = 0; i < val_.size(); ++i) {
    rcount_[i] = std::llround(val_[i] / quantum_);
    pcount_[i + 1] = pcount_[i] + rcount_[i] * (bp_[i + 1] - bp_[i]);
  }
}

double StepSeries::value_at(int64_t t) const {
  if (bp_.empty() || t < begin() || t >= end())
    throw input_error("step series query at " + format_int64(t) + " outside domain");
  size_t k = static_cast<size_t>(std::upper_bound(bp_.begin(), bp_.end(), t) - bp_.begin()) - 1;
  return val_[k];
}

int64_t StepSeries::count_at(int64_t t) const {
  size_t k = static_cast<size_t>(std::upper_bound(bp_.begin(), bp_.end(), t) - bp_.begin());
  if (k > 0) --k;
  if (k >= val_.size()) k = val_.size() - 1;
  return pcount_[k] + rcount_[k] * (t - bp_[k]);
}

double StepSeries::integral(int64_t t0, int64_t t1) const {
  if (bp_.empty() || t0 < begin() || t1 > end() || t0 > t1)
    throw input_error("integral window [" + format_int64(t0) + ", " + format_int64(t1) +
                      "] outside series domain [" + format_int64(begin()) + ", " +
                      format_int64(end()) + "]");
  return static_cast<double>(count_at(t1) - count_at(t0)) * quantum_;
}

StepSeries StepSeries::scaled(double factor) const {
  std::vector<double> v(val_);
  for (double& x : v) x *= factor;
  return StepSeries(bp_, std::move(v));
}

StepSeries StepSeries::slice(int64_t t0, int64_t t1) const {
  if (!covers(t0, t1) || t0 == t1)
    throw input_error("slice window outside series domain");
  std::vector<int64_t> bp{t0};
  std::vector<double> vals;
  for (size_t i = 0; i < bp_.size(); ++i) {
    if (bp_[i] > t0 && bp_[i] < t1) {
      vals.push_back(value_at(bp[bp.size() - 1]));
      bp.push_back(bp_[i]);
    }
  }
  vals.push_back(value_at(bp.back()));
  bp.push_back(t1);
  return StepSeries(std::move(bp), std::move(vals));
}

StepSeries StepSeries::weighted_sum(
    const std::vector<std::pair<double, const StepSeries*>>& terms, int64_t t0, int64_t t1) {
  if (terms.empty()) throw input_error("weighted_sum needs at least one series");
  if (t0 >= t1) throw input_error("weighted_sum window is empty");
  std::vector<int64_t> bp{t0, t1};
  for (const auto& [w, s] : terms) {
    (void)w;
    if (!s->covers(t0, t1))
      throw input_error("weighted_sum: series does not cover the window");
    for (int64_t b : s->breakpoints())
      if (b > t0 && b < t1) bp.push_back(b);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> vals(bp.size() - 1, 0.0);
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    double v = 0.0;
    for (const auto& [w, s] : terms) v += w * s->value_at(bp[i]);
    vals[i] = v;
  }
  return StepSeries(std::move(bp), std::move(vals));
}

double time_mean(const StepSeries& s) {
  return s.integral(s.begin(), s.end()) / static_cast<double>(s.end() - s.begin());
}

double time_median(const StepSeries& s) {
  std::vector<std::pair<double, int64_t>> wv;
  const auto& bp = s.breakpoints();
  const auto& val = s.values();
  for (size_t i = 0; i < val.size(); ++i) wv.emplace_back(val[i], bp[i + 1] - bp[i]);
  std::sort(wv.begin(), wv.end());
  int64_t total = s.end() - s.begin();
  double half = static_cast<double>(total) / 2.0;
  double cum = 0.0;
  for (size_t i = 0; i < wv.size(); ++i) {
    cum += static_cast<double>(wv[i].second);
    if (cum > half) return wv[i].first;
    if (cum == half)
      return i + 1 < wv.size() ? (wv[i].first + wv[i + 1].first) / 2.0 : wv[i].first;
  }
  return wv.back().first;
}

double percentile(std::vector<double> sample, double p) {
  if (sample.empty()) throw input_error("percentile of empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw input_error("percentile p outside [0, 100]");
  std::sort(sample.begin(), sample.end());
  if (sample.size() == 1) return sample[0];
  double rank = p / 100.0 * static_cast<double>(sample.size() - 1);
  size_t lo = static_cast<size_t>(rank);
  if (lo >= sample.size() - 1) return sample.back();
  double frac = rank - static_cast<double>(lo);
  return sample[lo] * (1.0 - frac) + sample[lo + 1] * frac;
}

}  // namespace carbonshift
