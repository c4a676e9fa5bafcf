#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "breachsim/alerts/detectors.hpp"
#include "breachsim/alerts/escalation.hpp"
#include "breachsim/alerts/routing.hpp"
#include "breachsim/alerts/soc.hpp"
#include "breachsim/attack/blackpos.hpp"
#include "breachsim/scenario/timefmt.hpp"
#include "breachsim/segmentation/policy.hpp"
#include "breachsim/sim/topology.hpp"

namespace breachsim::scenario {

struct HostSpec {
  std::string id;
  std::string segment;
  sim::HostRole role = sim::HostRole::BusinessServer;
  int site = 0;
  std::vector<std::string> credentials;
};

/// `count` numbered hosts "<name>-001"...; site = index % sites.
struct HostGroup {
  std::string name;
  int count = 0;
  std::string segment;
  sim::HostRole role = sim::HostRole::PosTerminal;
  int sites = 1;
  std::vector<std::string> credentials;
};

struct SwipeSchedule {
  sim::Minutes first = 8 * 60;  ///< minute of day of the first swipe batch
  sim::Minutes last = 20 * 60;  ///< no batch after this minute of day
  sim::Minutes every = 120;
  std::uint32_t cards = 3;      ///< cards per terminal per batch
};

struct PaymentConfig {
  std::uint32_t cards = 40'000;
  bool tokenization = false;
  std::string merchant = "target";
  std::size_t memory_bytes = 4096;
  std::string pos_process = "pos.exe";
  SwipeSchedule swipes;
};

/// Daily background flow. src/dst name a host or a host group.
struct RecurringFlow {
  std::string src;
  std::string dst;
  std::string channel;
  std::optional<std::string> credential;
  sim::Minutes at = 0;  ///< minute of day
  std::uint64_t bytes = 1024;
};

struct AgentConfig {
  attack::BlackPosAgent agent;
  std::string process_name = "posagent.exe";
  sim::Minutes scan_every = 120;
  sim::Minutes scan_offset = 60;
  sim::Minutes upload_minute = 0;  ///< minute past each hour
  sim::Minutes relay_minute = 30;
};

/// Attacker step. Fields a given action does not use stay empty.
struct PlanStep {
  sim::Minutes at = 0;
  std::string action;  ///< phish, break-in, takeover-repos, deploy-agent, start-collection, deploy-exfil, start-exfil
  std::string host;
  std::string via;
  std::vector<std::string> targets;
  std::string channel;
  std::string credential;
  std::string account;
  int version = 1;
};

struct IntegrityConfig {
  bool enforce = false;
  std::string center = "integrity-center";
};

struct SegmentationConfig {
  segmentation::SegmentationPolicy policy;
  bool behavior = false;
  std::uint64_t warmup = 20;
};

struct AlertConfig {
  alerts::DetectorConfig detectors;
  alerts::EscalationPolicy escalation;
  std::vector<alerts::RoutingRule> routing = alerts::default_routing();
  bool correlation_raise = false;
  sim::Minutes tick_every = 60;
};

/// Outside parties stepping in (law enforcement notice, cleanup).
struct ResponseConfig {
  std::string soc_host = "soc";
  std::optional<sim::Minutes> notify_at;
  std::string notify_when = "drops-hold-data";  ///< or "always"
  std::optional<sim::Minutes> removal_delay;
};

struct ScenarioConfig {
  std::string name;
  Date epoch{2013, 9, 1};
  sim::Minutes duration = 0;
  std::uint64_t seed = 1;

  std::vector<std::string> segments;
  std::vector<std::pair<std::string, std::string>> adjacency;
  std::vector<std::string> domain_credentials;
  std::vector<HostSpec> hosts;
  std::vector<HostGroup> groups;

  PaymentConfig payment;
  std::vector<RecurringFlow> traffic;
  AgentConfig agent;
  std::vector<PlanStep> plan;

  IntegrityConfig integrity;
  SegmentationConfig segmentation;
  AlertConfig alerts;
  alerts::SocPolicy soc;
  ResponseConfig response;
};

struct ConfigIssue {
  std::string path;  ///< JSON-pointer-like location, e.g. "/network/hosts/3/segment"
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// JSON text (comments allowed) to a validated config.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical JSON; parse_scenario(dump_scenario(c)) reproduces c.
std::string dump_scenario(const ScenarioConfig& c);

/// Referential and range checks; throws ValidationError listing every issue.
void validate(const ScenarioConfig& c);

/// Group names expand to their members; host ids map to themselves.
std::vector<sim::HostId> resolve_hosts(const ScenarioConfig& c, const std::string& name);
std::vector<HostSpec> expand_hosts(const ScenarioConfig& c);
sim::Topology build_topology(const ScenarioConfig& c);

}  // namespace breachsim::scenario
