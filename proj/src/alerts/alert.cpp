#include "breachsim/alerts/alert.hpp"

namespace breachsim::alerts {

Severity next_severity(Severity s) {
  switch (s) {
    case Severity::Info: return Severity::Minor;
    case Severity::Minor: return Severity::Major;
    case Severity::Major:
    case Severity::Critical: return Severity::Critical;
  }
  return Severity::Critical;
}

}  // namespace breachsim::alerts
