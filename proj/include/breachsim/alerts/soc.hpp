#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"
#include "breachsim/alerts/escalation.hpp"
#include "breachsim/sim/world.hpp"

namespace breachsim::alerts {

enum class SocMode { IgnoreAll, ActOnCriticalAfterN, ActImmediately };

std::string_view to_string(SocMode m);
std::optional<SocMode> parse_soc_mode(std::string_view s);

struct SocPolicy {
  SocMode mode = SocMode::IgnoreAll;
  std::uint32_t n = 1;  ///< notifications at critical before acting
};

/// Decides when analysts act on an alert.
class Soc {
 public:
  explicit Soc(SocPolicy p) : policy_(p) {}

  bool on_raised(const Alert& a);
  /// `a` is the alert after the notification was applied.
  bool on_notification(const Alert& a, const Notification& n);

  const SocPolicy& policy() const noexcept { return policy_; }

 private:
  SocPolicy policy_;
  std::map<std::uint64_t, std::uint32_t> critical_notices_;
  std::set<std::uint64_t> acted_;
};

/// Kills every process on `host` not in `legit` and marks the host's alerts
/// handled. Logs one soc-action. Returns the killed pids.
std::vector<sim::ProcessId> remove_malware(sim::World& world, const sim::HostId& host,
                                           const std::set<std::pair<sim::HostId, sim::ProcessId>>& legit,
                                           std::vector<Alert>& alerts, std::optional<std::uint64_t> alert_id,
                                           const std::string& detail);

}  // namespace breachsim::alerts
