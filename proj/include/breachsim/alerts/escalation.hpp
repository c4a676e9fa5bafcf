#pragma once

#include <map>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"

namespace breachsim::alerts {

struct EscalationPolicy {
  std::map<Severity, sim::Minutes> deadlines{{Severity::Info, 4320},
                                             {Severity::Minor, 2880},
                                             {Severity::Major, 1440},
                                             {Severity::Critical, 240}};
  Severity floor = Severity::Major;
  Severity cap = Severity::Critical;

  sim::Minutes deadline(Severity s) const;
};

/// Throws std::invalid_argument unless every deadline is positive and floor <= cap.
void validate(const EscalationPolicy& p);

struct Notification {
  std::uint64_t alert_id = 0;
  sim::Minutes time = 0;
  Severity from = Severity::Info;
  Severity to = Severity::Info;
  std::string reason;  ///< "escalated" or "reminder"
};

/// Unhandled alerts at or above the floor rise one level once their deadline
/// has lapsed since they were raised or last escalated. Alerts already at the
/// cap get a reminder each time the cap's deadline lapses since the last
/// notification.
std::vector<Notification> tick_escalation(std::vector<Alert>& alerts, sim::Minutes now, const EscalationPolicy& p);

}  // namespace breachsim::alerts
