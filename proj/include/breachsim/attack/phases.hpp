#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>

#include "breachsim/sim/event.hpp"
#include "breachsim/sim/topology.hpp"

namespace breachsim::attack {

enum class Phase { InitialInfection = 0, PosInfection, DataCollection, Exfiltration, Monetization };

std::string_view to_string(Phase p);

/// Evidence gathered from the log so far; each flag enables one transition.
struct PhaseEvidence {
  bool vendor_credential = false;  ///< credential stolen on a vendor host
  bool pos_access = false;         ///< stolen credential delivered a cross-segment flow into a POS host
  bool agent_scan = false;         ///< a service-registered process scanned POS memory
  bool staged = false;             ///< data written on a POS host by an attacker process
  bool repo_upload = false;        ///< data flow from POS delivered to an internal file server
  bool drop_delivery = false;      ///< data flow delivered to an external drop
};

struct AttackerState {
  Phase phase = Phase::InitialInfection;
  std::set<std::string> stolen_credentials;
  std::set<sim::HostId> controlled_hosts;
  PhaseEvidence evidence;
  std::set<std::pair<sim::HostId, std::uint32_t>> service_pids;
  std::size_t cursor = 0;  ///< log entries already ingested
};

/// Ingests log entries past s.cursor (the log must be the same growing log on
/// every call) and advances at most one phase if the next transition's
/// evidence is present.
AttackerState advance_phase(AttackerState s, std::span<const sim::Event> log, const sim::Topology& topo);

}  // namespace breachsim::attack
