#pragma once

#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"
#include "breachsim/sim/event.hpp"
#include "breachsim/sim/topology.hpp"

namespace breachsim::alerts {

/// Artifact keys: "proc:<host>/<pid>", "bin:<host>/<digest>", "file:<host>/<path>", "flow:<id>".
std::string proc_key(const sim::HostId& h, sim::ProcessId pid);
std::string file_key(const sim::HostId& h, const std::string& path);
std::string flow_key(sim::FlowId id);
std::string bin_key(const sim::HostId& h, const std::string& digest);

/// Evidence kind of a delivered, data-carrying flow that leaves its segment.
inline constexpr std::string_view kFlowEgress = "flow-egress";

/// What an event produced and consumed, for citing it as evidence.
EvidenceRef make_evidence(const sim::Event& e, const sim::Topology& topo);

}  // namespace breachsim::alerts
