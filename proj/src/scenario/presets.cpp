#include "breachsim/scenario/presets.hpp"

namespace breachsim::scenario {

namespace {

using sim::HostRole;

sim::Minutes at(const Date& epoch, const char* stamp) { return *parse_timestamp(stamp, epoch); }

attack::AgentKey preset_key() {
  attack::AgentKey k{};
  // fixed so the preset files stay stable; any 32 bytes work
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(0x5a ^ (i * 37 + 11));
  return k;
}

}  // namespace

ScenarioConfig target_2013() {
  ScenarioConfig c;
  c.name = "target-2013";
  c.epoch = Date{2013, 9, 1};
  c.duration = at(c.epoch, "2013-12-20 00:00");
  c.seed = 2013;

  c.segments = {"vendor", "business", "corp", "pos", "security", "external"};
  c.adjacency = {{"vendor", "business"}, {"business", "pos"},     {"business", "corp"}, {"corp", "pos"},
                 {"corp", "external"},   {"security", "pos"},     {"security", "business"}};
  c.domain_credentials = {"fazio-hvac"};
  c.hosts = {
      {"fazio", "vendor", HostRole::Vendor, 0, {"fazio-hvac"}},
      {"billing-1", "business", HostRole::BusinessServer, 0, {}},
      {"ftp-1", "corp", HostRole::FileServer, 0, {}},
      {"ftp-2", "corp", HostRole::FileServer, 1, {}},
      {"ftp-3", "corp", HostRole::FileServer, 2, {}},
      {"drop-miami", "external", HostRole::ExternalDrop, 0, {"drop-ftp"}},
      {"drop-brazil", "external", HostRole::ExternalDrop, 0, {"drop-ftp"}},
      {"integrity-center", "security", HostRole::IntegrityCenter, 0, {"integrity-svc"}},
      {"soc", "security", HostRole::SocConsole, 0, {}},
  };
  c.groups = {{"pos", 100, "pos", HostRole::PosTerminal, 3, {"pos-svc"}}};

  c.payment = PaymentConfig{};
  c.payment.cards = 40'000;

  c.traffic = {
      {"fazio", "billing-1", "billing", "fazio-hvac", 9 * 60, 4096},
      {"pos", "billing-1", "settlement", "pos-svc", 23 * 60, 2048},
  };

  auto& a = c.agent.agent;
  a.key = preset_key();
  a.repo_hosts = {sim::HostId("ftp-1"), sim::HostId("ftp-2"), sim::HostId("ftp-3")};
  a.drop_hosts = {sim::HostId("drop-miami"), sim::HostId("drop-brazil")};
  a.obfuscated = true;
  a.encrypted = true;

  const std::vector<std::string> repos{"ftp-1", "ftp-2", "ftp-3"};
  c.plan = {
      {at(c.epoch, "2013-09-15 12:00"), "phish", "fazio", "", {}, "", "fazio-hvac", "", 1},
      {at(c.epoch, "2013-11-15 12:00"), "break-in", "billing-1", "fazio", {}, "billing", "fazio-hvac", "", 1},
      {at(c.epoch, "2013-11-15 12:00"), "takeover-repos", "", "billing-1", repos, "remote-admin", "fazio-hvac",
       "Best1_user", 1},
      {at(c.epoch, "2013-11-15 12:00"), "deploy-agent", "", "billing-1",
       {"pos-001", "pos-002", "pos-003", "billing-1"}, "file-share", "fazio-hvac", "", 1},
      {at(c.epoch, "2013-11-27 12:00"), "start-collection", "", "", {}, "", "", "", 1},
      {at(c.epoch, "2013-11-30 12:00"), "deploy-agent", "", "billing-1", {"pos"}, "file-share", "fazio-hvac", "",
       1},
      {at(c.epoch, "2013-11-30 12:00"), "deploy-exfil", "", "billing-1", repos, "remote-admin", "Best1_user", "",
       1},
      {at(c.epoch, "2013-12-02 12:00"), "start-exfil", "", "", {}, "", "", "", 1},
      {at(c.epoch, "2013-12-02 12:00"), "deploy-exfil", "", "billing-1", repos, "remote-admin", "Best1_user", "",
       2},
  };

  c.integrity.enforce = false;
  c.segmentation.policy.kind = segmentation::PolicyKind::FlatVlan;
  c.segmentation.policy.vlan_allow = {
      {"vendor", "business"}, {"pos", "business"}, {"security", "pos"}, {"corp", "external"}};
  c.segmentation.policy.credential_bypass = true;
  c.segmentation.behavior = false;
  c.alerts.correlation_raise = false;
  c.soc = alerts::SocPolicy{alerts::SocMode::IgnoreAll, 1};

  c.response.notify_at = at(c.epoch, "2013-12-12 12:00");
  c.response.notify_when = "drops-hold-data";
  c.response.removal_delay = 3 * sim::kMinutesPerDay;
  return c;
}

ScenarioConfig hardened() {
  ScenarioConfig c = target_2013();
  c.name = "hardened";
  c.integrity.enforce = true;
  c.payment.tokenization = true;
  auto& p = c.segmentation.policy;
  p.kind = segmentation::PolicyKind::ZeroTrust;
  p.monitor_all = true;
  p.matrix = {
      {"fazio-hvac", "vendor", "business", "billing"},
      {"pos-svc", "pos", "business", "settlement"},
      {"integrity-svc", "security", "pos", "update"},
  };
  c.segmentation.behavior = true;
  c.alerts.correlation_raise = true;
  c.soc = alerts::SocPolicy{alerts::SocMode::ActOnCriticalAfterN, 1};
  return c;
}

std::vector<std::string> preset_names() { return {"target-2013", "hardened"}; }

ScenarioConfig preset(std::string_view name) {
  if (name == "target-2013") return target_2013();
  if (name == "hardened") return hardened();
  throw UnknownPreset(std::string(name));
}

}  // namespace breachsim::scenario
