#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"
#include "breachsim/alerts/correlation.hpp"
#include "breachsim/attack/phases.hpp"
#include "breachsim/scenario/config.hpp"
#include "breachsim/sim/event.hpp"

namespace breachsim::scenario {

/// Timeline entries, in the order they happened in 2013.
inline constexpr const char* kMilestoneNames[] = {
    "vendor-compromise",     "network-break-in",  "collection-start",       "pos-malware-installed",
    "exfil-malware-installed", "first-alerts",    "exfiltration-start",     "additional-alerts",
    "external-notification", "malware-removal",
};

struct Milestone {
  std::string name;
  sim::Minutes time = 0;
  std::uint64_t seq = 0;
};

struct PhaseTime {
  attack::Phase phase = attack::Phase::InitialInfection;
  sim::Minutes time = 0;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  Date epoch;
  sim::Minutes duration = 0;
  std::uint64_t events = 0;

  std::uint64_t records_scraped = 0;
  std::uint64_t bytes_scraped = 0;
  std::uint64_t records_staged = 0;  ///< on internal repositories
  std::uint64_t bytes_staged = 0;
  std::uint64_t records_exfiltrated = 0;
  std::uint64_t bytes_exfiltrated = 0;
  std::uint64_t loot_pans = 0;  ///< Luhn-valid digit runs in decrypted loot

  std::optional<sim::Minutes> breach_start;
  std::optional<sim::Minutes> first_alert_time;
  std::optional<sim::Minutes> detection_time;
  std::optional<sim::Minutes> dwell_time;

  std::uint64_t alerts_total = 0;
  std::map<std::string, std::uint64_t> alerts_by_severity;
  std::map<std::string, std::uint64_t> alerts_by_detector;
  std::uint64_t escalations = 0;
  std::uint64_t reminders = 0;
  std::vector<alerts::PlotChain> chains;
  std::uint64_t critical_chains = 0;

  std::uint64_t flows_attempted = 0;
  std::uint64_t flows_delivered = 0;
  std::uint64_t flows_denied = 0;
  std::uint64_t monitor_records = 0;
  std::uint64_t agent_flows = 0;
  std::uint64_t agent_flows_outside_hours = 0;
  std::map<std::string, std::uint64_t> exec_verdicts;
  std::uint64_t soc_actions = 0;

  std::vector<Milestone> milestones;
  std::vector<PhaseTime> phases;
  attack::Phase final_phase = attack::Phase::InitialInfection;

  std::optional<Milestone> milestone(std::string_view name) const;
};

/// Everything here is recomputed from the log; the config only supplies
/// the topology, the agent key and the office-hours window.
Report compute_report(const ScenarioConfig& cfg, std::uint64_t seed, std::span<const sim::Event> log);

/// Alerts as they were raised, rebuilt from alert-raised events.
std::vector<alerts::Alert> alerts_from_log(std::span<const sim::Event> log, const sim::Topology& topo);

enum class ReportFormat { Json, Text };

class UnsupportedFormat : public std::invalid_argument {
 public:
  explicit UnsupportedFormat(const std::string& f) : std::invalid_argument("unsupported report format: " + f) {}
};

ReportFormat parse_format(std::string_view s);
std::string emit_report(const Report& r, ReportFormat f);
std::string emit_report(const Report& r, std::string_view format);

/// Numeric fields that differ between two reports, "name: a -> b" per line.
std::string diff_reports(const Report& a, const Report& b);

}  // namespace breachsim::scenario
