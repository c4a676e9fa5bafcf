#include "breachsim/alerts/routing.hpp"

#include <algorithm>

namespace breachsim::alerts {

bool RoutingRule::matches(const Alert& a) const {
  if (a.severity < min || a.severity > max) return false;
  if (type_pattern == "*") return true;
  if (!type_pattern.empty() && type_pattern.back() == '*') {
    return a.alert_type.starts_with(std::string_view(type_pattern).substr(0, type_pattern.size() - 1));
  }
  return a.alert_type == type_pattern;
}

std::vector<RoutingRule> default_routing() {
  return {
      {Severity::Critical, Severity::Critical, "*", {std::string(kConsoleFlash), "mail:ops", "dashboard"}},
      {Severity::Major, Severity::Major, "*", {"mail:analysts", "dashboard"}},
      {Severity::Info, Severity::Critical, "*", {"dashboard"}},
  };
}

void validate_routing(const std::vector<RoutingRule>& rules) {
  const bool has_default = std::any_of(rules.begin(), rules.end(), [](const RoutingRule& r) {
    return r.type_pattern == "*" && r.min == Severity::Info && r.max == Severity::Critical;
  });
  if (!has_default) throw RoutingError("routing rules need a default rule (info..critical, type *)");
  for (const auto& r : rules) {
    if (r.min > r.max) throw RoutingError("routing rule with min severity above max");
    if (r.channels.empty()) throw RoutingError("routing rule without channels");
  }
}

std::vector<std::string> route_alert(const Alert& a, const std::vector<RoutingRule>& rules) {
  auto it = std::find_if(rules.begin(), rules.end(), [&](const RoutingRule& r) { return r.matches(a); });
  if (it == rules.end()) throw RoutingError("no routing rule matches alert type " + a.alert_type);
  std::vector<std::string> out = it->channels;
  if (a.severity == Severity::Critical && std::find(out.begin(), out.end(), kConsoleFlash) == out.end()) {
    out.insert(out.begin(), std::string(kConsoleFlash));
  }
  return out;
}

}  // namespace breachsim::alerts
