#include "breachsim/scenario/timefmt.hpp"

#include <chrono>
#include <cstdio>

namespace breachsim::scenario {

namespace {

std::optional<int> digits(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::chrono::sys_days to_days(const Date& d) {
  return std::chrono::sys_days{std::chrono::year{d.year} / std::chrono::month{static_cast<unsigned>(d.month)} /
                               std::chrono::day{static_cast<unsigned>(d.day)}};
}

std::string pad2(long v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02ld", v);
  return buf;
}

}  // namespace

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = digits(s.substr(0, 4));
  auto m = digits(s.substr(5, 2));
  auto d = digits(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{*y, *m, *d};
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::optional<sim::Minutes> parse_clock(std::string_view s) {
  if (s.size() != 5 || s[2] != ':') return std::nullopt;
  auto h = digits(s.substr(0, 2));
  auto m = digits(s.substr(3, 2));
  if (!h || !m || *m > 59 || *h > 24 || (*h == 24 && *m != 0)) return std::nullopt;
  return static_cast<sim::Minutes>(*h) * 60 + *m;
}

std::string format_clock(sim::Minutes minute_of_day) {
  return pad2(minute_of_day / 60) + ":" + pad2(minute_of_day % 60);
}

std::optional<sim::Minutes> parse_timestamp(std::string_view s, const Date& epoch) {
  if (s.size() != 16 || s[10] != ' ') return std::nullopt;
  auto d = parse_date(s.substr(0, 10));
  auto c = parse_clock(s.substr(11));
  if (!d || !c || *c >= sim::kMinutesPerDay) return std::nullopt;
  const auto days = (to_days(*d) - to_days(epoch)).count();
  return static_cast<sim::Minutes>(days) * sim::kMinutesPerDay + *c;
}

std::string format_timestamp(sim::Minutes t, const Date& epoch) {
  const sim::Minutes day = t >= 0 ? t / sim::kMinutesPerDay : -((-t + sim::kMinutesPerDay - 1) / sim::kMinutesPerDay);
  const sim::Minutes rem = t - day * sim::kMinutesPerDay;
  const std::chrono::year_month_day ymd{to_days(epoch) + std::chrono::days{day}};
  Date d{static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
         static_cast<int>(static_cast<unsigned>(ymd.day()))};
  return format_date(d) + " " + format_clock(rem);
}

}  // namespace breachsim::scenario
