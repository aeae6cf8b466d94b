#include "carbonshift/optimizer.hpp"

#include <algorithm>
#include <limits>

#include "carbonshift/errors.hpp"

namespace carbonshift {

std::vector<double> moving_window_integrals(const StepSeries& f, int64_t D, int64_t Tmin,
                                            int64_t Tmax, int64_t quantum) {
  if (quantum <= 0) throw input_error("window scan quantum must be positive");
  if (D < 0) throw input_error("window duration must be non-negative");
  if (Tmax < Tmin || (Tmax - Tmin) % quantum != 0)
    throw input_error("window scan range must be a multiple of the quantum");
  if (!f.covers(Tmin, Tmax + D))
    throw input_error("rate function does not cover the scan range");
  std::vector<double> out;
  out.reserve(size_t((Tmax - Tmin) / quantum) + 1);
  for (int64_t t = Tmin; t <= Tmax; t += quantum) out.push_back(f.window_integral(t, D));
  return out;
}

std::vector<OptimalPoint> optimal_points(const std::vector<double>& fI, bool reverse) {
  if (fI.empty()) throw input_error("optimal points of an empty curve");
  const size_t n = fI.size();
  std::vector<OptimalPoint> out;
  auto turning = [&](size_t k) {
    return fI[k] - fI[k - 1] != fI[k + 1] - fI[k];
  };
  if (!reverse) {
    out.push_back({0, fI[0]});
    double last = fI[0];
    for (size_t k = 1; k + 1 < n; ++k)
      if (turning(k) && fI[k] < last) {  // strict: keep the earliest minimum
        last = fI[k];
        out.push_back({k, fI[k]});
      }
  } else {
    out.push_back({n - 1, fI[n - 1]});
    double last = fI[n - 1];
    for (size_t k = n - 1; k-- > 1;)
      if (turning(k) && fI[k] <= last) {  // non-strict: reach the earliest suffix minimum
        last = fI[k];
        out.push_back({k, fI[k]});
      }
    std::reverse(out.begin(), out.end());
  }
  return out;
}

SchedulePlan optimize(const EmissionRateFns& e, int64_t quantum) {
  if (quantum <= 0) throw input_error("optimize quantum must be positive");
  if (e.D1 < 0 || e.D2 < 0 || e.D3 < 0) throw input_error("stage durations must be non-negative");
  const int64_t span = e.T4 - e.T0 - (e.D1 + e.D2 + e.D3);
  if (span < 0) throw infeasible_error("schedule window shorter than the stage durations");
  for (const StepSeries* f : {&e.f1, &e.f2, &e.f3})
    if (!f->covers(e.T0, e.T4))
      throw input_error("rate function does not cover the schedule window");

  const int64_t m = span / quantum;  // tail below one quantum is unreachable
  const int64_t a1 = e.T0;
  const int64_t a2 = e.T0 + e.D1;
  const int64_t a3 = e.T0 + e.D1 + e.D2;
  const auto fI1 = moving_window_integrals(e.f1, e.D1, a1, a1 + m * quantum, quantum);
  const auto fI2 = moving_window_integrals(e.f2, e.D2, a2, a2 + m * quantum, quantum);
  const auto fI3 = moving_window_integrals(e.f3, e.D3, a3, a3 + m * quantum, quantum);
  const auto op1 = optimal_points(fI1, false);
  const auto op3 = optimal_points(fI3, true);

  double best = std::numeric_limits<double>::infinity();
  size_t bk = 0, bj = 0, bl = 0;
  size_t p1 = 0;  // last entry of op1 with index <= j
  size_t p3 = 0;  // first entry of op3 with index >= j
  for (size_t j = 0; j < fI2.size(); ++j) {
    while (p1 + 1 < op1.size() && op1[p1 + 1].index <= j) ++p1;
    while (op3[p3].index < j) ++p3;  // op3 always holds the last grid index
    // Stage grids share the quantum, so t1 <= t2 - D1 is exactly k <= j and
    // t3 >= t2 + D2 is exactly l >= j; the bound itself always competes.
    const size_t k = op1[p1].value <= fI1[j] ? op1[p1].index : j;
    const size_t l = fI3[j] <= op3[p3].value ? j : op3[p3].index;
    const double total = (fI1[k] + fI2[j]) + fI3[l];
    if (total < best) {
      best = total;
      bk = k;
      bj = j;
      bl = l;
    }
  }

  SchedulePlan plan;
  plan.t1 = a1 + int64_t(bk) * quantum;
  plan.t2 = a2 + int64_t(bj) * quantum;
  plan.t3 = a3 + int64_t(bl) * quantum;
  plan.input_g = fI1[bk];
  plan.compute_g = fI2[bj];
  plan.output_g = fI3[bl];
  plan.total_g = best;
  return plan;
}

std::pair<int64_t, double> optimize_compute_only(const StepSeries& f2, int64_t T0, int64_t T4,
                                                 int64_t D2, int64_t quantum) {
  if (quantum <= 0) throw input_error("optimize quantum must be positive");
  if (D2 < 0) throw input_error("stage durations must be non-negative");
  const int64_t span = T4 - T0 - D2;
  if (span < 0) throw infeasible_error("schedule window shorter than the compute duration");
  if (!f2.covers(T0, T4)) throw input_error("rate function does not cover the schedule window");
  const int64_t m = span / quantum;
  const auto fI = moving_window_integrals(f2, D2, T0, T0 + m * quantum, quantum);
  size_t bj = 0;
  for (size_t j = 1; j < fI.size(); ++j)
    if (fI[j] < fI[bj]) bj = j;
  return {T0 + int64_t(bj) * quantum, fI[bj]};
}

}  // namespace carbonshift
