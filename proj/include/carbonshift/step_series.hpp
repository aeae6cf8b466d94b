#pragma once

#include <cstdint>
#include <vector>

namespace carbonshift {

// Piecewise-constant series over integer epoch-seconds. Value i applies on
// [breakpoints[i], breakpoints[i+1]). Window integrals are differences of a
// precomputed prefix integral, which makes adjacent windows add up exactly.
class StepSeries {
 public:
  StepSeries() = default;
  StepSeries(std::vector<int64_t> breakpoints, std::vector<double> values);

  static StepSeries constant(int64_t begin, int64_t end, double value);

  int64_t begin() const { return bp_.front(); }
  int64_t end() const { return bp_.back(); }
  bool empty() const { return bp_.empty(); }
  size_t steps() const { return val_.size(); }
  const std::vector<int64_t>& breakpoints() const { return bp_; }
  const std::vector<double>& values() const { return val_; }

  // Value on the step containing t; error outside [begin, end).
  double value_at(int64_t t) const;

  // Integral over [t0, t1]; requires begin <= t0 <= t1 <= end.
  double integral(int64_t t0, int64_t t1) const;
  double window_integral(int64_t t, int64_t dur) const { return integral(t, t + dur); }

  bool covers(int64_t t0, int64_t t1) const {
    return !bp_.empty() && t0 >= begin() && t1 <= end() && t0 <= t1;
  }

  StepSeries scaled(double factor) const;

  // Restriction to [t0, t1); breakpoints clipped, error if not covered.
  StepSeries slice(int64_t t0, int64_t t1) const;

  // Weighted sum of several series over [t0, t1); the result's breakpoints
  // are the union of the inputs' breakpoints clipped to the window.
  static StepSeries weighted_sum(const std::vector<std::pair<double, const StepSeries*>>& terms,
                                 int64_t t0, int64_t t1);

 private:
  std::vector<int64_t> bp_;
  std::vector<double> val_;
  // Prefix integrals live on a power-of-two fixed-point grid so that window
  // integrals of adjacent windows add to the containing window's integral
  // bit-for-bit: counts are exact int64, and scaling by a power of two is
  // exact in binary floating point.
  std::vector<int64_t> pcount_;  // pcount_[i] = integral over [bp_[0], bp_[i]] in quanta
  std::vector<int64_t> rcount_;  // per-step rate in quanta per second
  double quantum_ = 1.0;         // power of two

  void build_prefix();
  int64_t count_at(int64_t t) const;
};

// Duration-weighted mean over the whole domain.
double time_mean(const StepSeries& s);
// Duration-weighted median (lower-midpoint convention at exact halves).
double time_median(const StepSeries& s);

// Percentile over a sample by linear interpolation between closest ranks;
// p in [0, 100].
double percentile(std::vector<double> sample, double p);

}  // namespace carbonshift
