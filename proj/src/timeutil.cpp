#include "carbonshift/timeutil.hpp"

#include <cstdio>

#include "carbonshift/errors.hpp"

namespace carbonshift {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
int64_t days_from_civil(int64_t y, int m, int d) {
  y -= m <= 2;
  int64_t era = (y >= 0 ? y : y - 399) / 400;
  int64_t yoe = y - era * 400;
  int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(int64_t z, int64_t& y, int& m, int& d) {
  z += 719468;
  int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  int64_t doe = z - era * 146097;
  int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = yoe + era * 400;
  int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  int64_t mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y += m <= 2;
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

int64_t parse_time8601(const std::string& s) {
  int y, mo, d, h, mi, sec;
  char tz;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &sec, &tz) != 7 ||
      tz != 'Z' || s.size() != 20)
    throw input_error("bad UTC timestamp (want YYYY-MM-DDTHH:MM:SSZ): '" + s + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      sec < 0 || sec > 59)
    throw input_error("timestamp field out of range: '" + s + "'");
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_time8601(int64_t epoch_s) {
  int64_t days = floor_div(epoch_s, 86400);
  int64_t rem = epoch_s - days * 86400;
  int64_t y;
  int mo, d;
  civil_from_days(days, y, mo, d);
  char buf[72];
  std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), mo, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

int hour_of_day_utc(int64_t epoch_s) {
  int64_t sec = epoch_s - floor_div(epoch_s, 86400) * 86400;
  return static_cast<int>(sec / 3600);
}

int month_utc(int64_t epoch_s) {
  int64_t y;
  int mo, d;
  civil_from_days(floor_div(epoch_s, 86400), y, mo, d);
  return mo;
}

}  // namespace carbonshift
