#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "breachsim/sim/vocab.hpp"

namespace breachsim::alerts {

using sim::Severity;

/// A logged event cited by an alert, with the artifacts it produced and consumed.
struct EvidenceRef {
  std::uint64_t seq = 0;
  std::string kind;
  std::vector<std::string> produces;
  std::vector<std::string> consumes;

  bool operator==(const EvidenceRef&) const = default;
};

struct EscalationStep {
  sim::Minutes time = 0;
  Severity from = Severity::Info;
  Severity to = Severity::Info;

  bool operator==(const EscalationStep&) const = default;
};

struct Alert {
  std::uint64_t id = 0;
  sim::Minutes timestamp = 0;
  std::string detector;
  std::string alert_type;
  Severity severity = Severity::Info;
  std::string classtype;
  std::string msg;
  std::string display_msg;
  sim::HostId subject_host;
  std::vector<EvidenceRef> evidence;
  bool handled = false;
  std::vector<EscalationStep> escalation_history;
  sim::Minutes last_notified = 0;

  bool operator==(const Alert&) const = default;
};

Severity next_severity(Severity s);

}  // namespace breachsim::alerts
