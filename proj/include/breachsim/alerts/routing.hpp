#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"

namespace breachsim::alerts {

inline constexpr std::string_view kConsoleFlash = "console-flash";

struct RoutingRule {
  Severity min = Severity::Info;
  Severity max = Severity::Critical;
  std::string type_pattern = "*";  ///< exact alert type, "prefix*", or "*"
  std::vector<std::string> channels;

  bool matches(const Alert& a) const;
};

class RoutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Critical to flash + ops mail + dashboard, major to analysts + dashboard,
/// everything else to the dashboard.
std::vector<RoutingRule> default_routing();

/// Throws RoutingError unless some rule matches every severity and type.
void validate_routing(const std::vector<RoutingRule>& rules);

/// Channels of the first matching rule; critical alerts always flash.
std::vector<std::string> route_alert(const Alert& a, const std::vector<RoutingRule>& rules);

}  // namespace breachsim::alerts
