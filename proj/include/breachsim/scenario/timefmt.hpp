#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "breachsim/sim/vocab.hpp"

namespace breachsim::scenario {

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  bool operator==(const Date&) const = default;
};

/// "YYYY-MM-DD"
std::optional<Date> parse_date(std::string_view s);
std::string format_date(const Date& d);

/// "YYYY-MM-DD HH:MM" as minutes since midnight of `epoch`.
std::optional<sim::Minutes> parse_timestamp(std::string_view s, const Date& epoch);
std::string format_timestamp(sim::Minutes t, const Date& epoch);

/// "HH:MM" as minute of day; "24:00" is accepted as the end of the day.
std::optional<sim::Minutes> parse_clock(std::string_view s);
std::string format_clock(sim::Minutes minute_of_day);

}  // namespace breachsim::scenario
