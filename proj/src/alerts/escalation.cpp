#include "breachsim/alerts/escalation.hpp"

#include <stdexcept>

namespace breachsim::alerts {

sim::Minutes EscalationPolicy::deadline(Severity s) const {
  auto it = deadlines.find(s);
  if (it == deadlines.end()) throw std::invalid_argument("no deadline for severity " + std::string(sim::to_string(s)));
  return it->second;
}

void validate(const EscalationPolicy& p) {
  for (Severity s : {Severity::Info, Severity::Minor, Severity::Major, Severity::Critical}) {
    if (p.deadline(s) <= 0) throw std::invalid_argument("escalation deadlines must be positive");
  }
  if (p.floor > p.cap) throw std::invalid_argument("escalation floor above cap");
}

std::vector<Notification> tick_escalation(std::vector<Alert>& alerts, sim::Minutes now, const EscalationPolicy& p) {
  std::vector<Notification> out;
  for (Alert& a : alerts) {
    if (a.handled || a.severity < p.floor) continue;
    if (a.severity < p.cap) {
      const sim::Minutes since = a.escalation_history.empty() ? a.timestamp : a.escalation_history.back().time;
      if (now - since < p.deadline(a.severity)) continue;
      const Severity to = std::min(next_severity(a.severity), p.cap);
      a.escalation_history.push_back({now, a.severity, to});
      out.push_back({a.id, now, a.severity, to, "escalated"});
      a.severity = to;
      a.last_notified = now;
    } else if (now - a.last_notified >= p.deadline(a.severity)) {
      out.push_back({a.id, now, a.severity, a.severity, "reminder"});
      a.last_notified = now;
    }
  }
  return out;
}

}  // namespace breachsim::alerts
