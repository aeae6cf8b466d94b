#include <doctest.h>

#include <random>

#include "carbonshift/errors.hpp"
#include "carbonshift/step_series.hpp"

using namespace carbonshift;

namespace {

// Brute-force integral at 1-second resolution; the independent reference
// for the prefix-sum implementation.
double riemann(const StepSeries& s, int64_t t0, int64_t t1) {
  double sum = 0.0;
  for (int64_t t = t0; t < t1; ++t) sum += s.value_at(t);
  return sum;
}

StepSeries random_series(std::mt19937_64& rng, int64_t t0, int steps, int64_t dt) {
  std::vector<int64_t> bp;
  std::vector<double> val;
  std::uniform_real_distribution<double> v(0.0, 500.0);
  for (int i = 0; i <= steps; ++i) bp.push_back(t0 + i * dt);
  for (int i = 0; i < steps; ++i) val.push_back(v(rng));
  return StepSeries(std::move(bp), std::move(val));
}

}  // namespace

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(StepSeries({0}, {}), input_error);
  CHECK_THROWS_AS(StepSeries({0, 10, 10}, {1.0, 2.0}), input_error);
  CHECK_THROWS_AS(StepSeries({0, 10, 5}, {1.0, 2.0}), input_error);
  CHECK_THROWS_AS(StepSeries({0, 10}, {1.0, 2.0}), input_error);
}

TEST_CASE("value_at picks the containing step") {
  StepSeries s({0, 10, 20}, {3.0, 7.0});
  CHECK(s.value_at(0) == 3.0);
  CHECK(s.value_at(9) == 3.0);
  CHECK(s.value_at(10) == 7.0);
  CHECK(s.value_at(19) == 7.0);
  CHECK_THROWS_AS(s.value_at(20), input_error);
  CHECK_THROWS_AS(s.value_at(-1), input_error);
}

TEST_CASE("two-step worked integral") {
  // 100 for one hour then 200 for one hour; 90-minute window from t=0.
  StepSeries s({0, 3600, 7200}, {100.0, 200.0});
  CHECK(s.window_integral(0, 5400) == 100.0 * 3600 + 200.0 * 1800);
}

TEST_CASE("window integral matches 1s riemann oracle") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    StepSeries s = random_series(rng, 1000, 12, 60);
    std::uniform_int_distribution<int64_t> pick(1000, 1000 + 12 * 60);
    int64_t a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    double got = s.integral(a, b);
    double want = riemann(s, a, b);
    CHECK(std::abs(got - want) <= 1e-9 * (std::abs(want) + 1.0));
  }
}

TEST_CASE("adjacent windows add exactly") {
  std::mt19937_64 rng(77);
  StepSeries s = random_series(rng, 0, 48, 3600);
  std::uniform_int_distribution<int64_t> pick(0, 48 * 3600);
  for (int trial = 0; trial < 200; ++trial) {
    int64_t a = pick(rng), b = pick(rng), c = pick(rng);
    int64_t lo = std::min({a, b, c}), hi = std::max({a, b, c});
    int64_t mid = a + b + c - lo - hi;
    // Bitwise equality, not approximate: prefix-sum differences telescope.
    CHECK(s.integral(lo, hi) == s.integral(lo, mid) + s.integral(mid, hi));
  }
}

TEST_CASE("windows outside the domain are errors") {
  StepSeries s({0, 100}, {1.0});
  CHECK_THROWS_AS(s.integral(-1, 50), input_error);
  CHECK_THROWS_AS(s.integral(50, 101), input_error);
  CHECK_THROWS_AS(s.integral(60, 50), input_error);
  CHECK(s.integral(0, 100) == 100.0);
  CHECK(s.integral(30, 30) == 0.0);
}

TEST_CASE("weighted_sum over union grid") {
  StepSeries a({0, 10, 20}, {1.0, 2.0});
  StepSeries b({0, 5, 20}, {10.0, 20.0});
  StepSeries c = StepSeries::weighted_sum({{2.0, &a}, {0.5, &b}}, 0, 20);
  REQUIRE(c.breakpoints() == std::vector<int64_t>({0, 5, 10, 20}));
  CHECK(c.value_at(0) == 2.0 * 1.0 + 0.5 * 10.0);
  CHECK(c.value_at(5) == 2.0 * 1.0 + 0.5 * 20.0);
  CHECK(c.value_at(10) == 2.0 * 2.0 + 0.5 * 20.0);
  StepSeries d = StepSeries::weighted_sum({{1.0, &a}}, 2, 8);
  CHECK(d.begin() == 2);
  CHECK(d.end() == 8);
  CHECK(d.integral(2, 8) == 6.0);
  CHECK_THROWS_AS(StepSeries::weighted_sum({{1.0, &a}}, 0, 21), input_error);
}

TEST_CASE("slice clips breakpoints") {
  StepSeries s({0, 10, 20, 30}, {1.0, 2.0, 3.0});
  StepSeries t = s.slice(5, 25);
  CHECK(t.breakpoints() == std::vector<int64_t>({5, 10, 20, 25}));
  CHECK(t.integral(5, 25) == 5.0 * 1 + 10.0 * 2 + 5.0 * 3);
}

TEST_CASE("time mean and median") {
  StepSeries s({0, 10, 20}, {1.0, 3.0});
  CHECK(time_mean(s) == 2.0);
  CHECK(time_median(s) == 2.0);  // exact-half convention: midpoint
  StepSeries u({0, 30, 40}, {5.0, 1.0});
  CHECK(time_median(u) == 5.0);
  StepSeries c = StepSeries::constant(0, 50, 4.2);
  CHECK(time_mean(c) == doctest::Approx(4.2).epsilon(1e-12));
  CHECK(time_median(c) == 4.2);  // median reads stored values, no quantization
}

TEST_CASE("percentile linear interpolation between closest ranks") {
  CHECK(percentile({0.01, 0.03}, 50.0) == 0.02);
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 25.0) == 1.75);
  CHECK(percentile({5.0}, 90.0) == 5.0);
  CHECK(percentile({3.0, 1.0, 2.0}, 0.0) == 1.0);
  CHECK(percentile({3.0, 1.0, 2.0}, 100.0) == 3.0);
  CHECK_THROWS_AS(percentile({}, 50.0), input_error);
  CHECK_THROWS_AS(percentile({1.0}, 101.0), input_error);
}
