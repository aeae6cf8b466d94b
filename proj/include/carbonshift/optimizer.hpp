#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "carbonshift/step_series.hpp"

namespace carbonshift {

// Emission rates (g/s) for the three stages of a migrated job: input
// transfer, compute, output transfer, with the window and durations.
struct EmissionRateFns {
  StepSeries f1, f2, f3;
  int64_t T0 = 0;  // earliest start
  int64_t T4 = 0;  // deadline
  int64_t D1 = 0, D2 = 0, D3 = 0;  // stage durations (s)
};

struct SchedulePlan {
  int64_t t1 = 0, t2 = 0, t3 = 0;  // stage starts
  double input_g = 0.0, compute_g = 0.0, output_g = 0.0;
  double total_g = 0.0;  // (input + compute) + output, exactly that fold
};

// f^I[k] = integral of f over [Tmin + k*q, Tmin + k*q + D]; q must divide
// Tmax - Tmin and f must cover [Tmin, Tmax + D].
std::vector<double> moving_window_integrals(const StepSeries& f, int64_t D, int64_t Tmin,
                                            int64_t Tmax, int64_t quantum);

struct OptimalPoint {
  size_t index = 0;
  double value = 0.0;
};

// Running-minimum envelope of the turning points of f^I, ascending by
// index. Forward scans keep strict improvements only (so a lookup lands on
// the earliest minimum); backward scans keep non-strict ones (so the lookup
// lands on the earliest suffix minimum). The scan-start boundary is always
// included.
std::vector<OptimalPoint> optimal_points(const std::vector<double>& fI, bool reverse);

// Minimum-emission start times under T0 <= t1, t1+D1 <= t2, t2+D2 <= t3,
// t3+D3 <= T4. Each stage searches its own grid anchored at its earliest
// feasible start; a window tail shorter than one quantum is not searched.
// Ties break to the smallest (t2, t1, t3).
SchedulePlan optimize(const EmissionRateFns& e, int64_t quantum);

// Time-shift-only baseline: argmin start of the compute window, earliest on
// ties. Equals optimize with D1 = D3 = 0.
std::pair<int64_t, double> optimize_compute_only(const StepSeries& f2, int64_t T0, int64_t T4,
                                                 int64_t D2, int64_t quantum);

}  // namespace carbonshift
