#include "breachsim/alerts/soc.hpp"

namespace breachsim::alerts {

std::string_view to_string(SocMode m) {
  switch (m) {
    case SocMode::IgnoreAll: return "ignore-all";
    case SocMode::ActOnCriticalAfterN: return "act-on-critical";
    case SocMode::ActImmediately: return "act-immediately";
  }
  return "?";
}

std::optional<SocMode> parse_soc_mode(std::string_view s) {
  if (s == "ignore-all") return SocMode::IgnoreAll;
  if (s == "act-on-critical") return SocMode::ActOnCriticalAfterN;
  if (s == "act-immediately") return SocMode::ActImmediately;
  return std::nullopt;
}

bool Soc::on_raised(const Alert& a) {
  bool act = false;
  if (policy_.mode == SocMode::ActImmediately) act = true;
  if (policy_.mode == SocMode::ActOnCriticalAfterN && a.severity == Severity::Critical) {
    act = ++critical_notices_[a.id] >= policy_.n;
  }
  return act && acted_.insert(a.id).second;
}

bool Soc::on_notification(const Alert& a, const Notification& n) {
  if (policy_.mode != SocMode::ActOnCriticalAfterN || n.to != Severity::Critical || a.handled) return false;
  if (++critical_notices_[a.id] < policy_.n) return false;
  return acted_.insert(a.id).second;
}

std::vector<sim::ProcessId> remove_malware(sim::World& world, const sim::HostId& host,
                                           const std::set<std::pair<sim::HostId, sim::ProcessId>>& legit,
                                           std::vector<Alert>& alerts, std::optional<std::uint64_t> alert_id,
                                           const std::string& detail) {
  std::vector<sim::ProcessId> victims;
  for (const auto& [pid, p] : world.topology().host(host).processes) {
    if (!legit.contains({host, pid})) victims.push_back(pid);
  }
  for (auto pid : victims) world.kill_process(host, pid);
  for (auto& a : alerts) {
    if (a.subject_host == host) a.handled = true;
  }
  world.engine().emit(sim::SocAction{"remove-malware", host, alert_id,
                                     detail + "; killed " + std::to_string(victims.size()) + " process(es)"});
  return victims;
}

}  // namespace breachsim::alerts
