#pragma once

#include <cstdint>
#include <string>

namespace carbonshift {

// "YYYY-MM-DDTHH:MM:SSZ" (UTC only) <-> unix epoch seconds.
int64_t parse_time8601(const std::string& s);
std::string format_time8601(int64_t epoch_s);

// UTC calendar helpers for sweep histograms.
int hour_of_day_utc(int64_t epoch_s);   // 0..23
int month_utc(int64_t epoch_s);         // 1..12

}  // namespace carbonshift
