#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"

namespace breachsim::alerts {

struct ChainLink {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::vector<std::string> artifacts;  ///< produced by `from`, consumed by `to`

  bool operator==(const ChainLink&) const = default;
};

struct PlotChain {
  std::vector<std::uint64_t> alert_ids;
  std::vector<ChainLink> links;
  Severity severity = Severity::Info;

  bool operator==(const PlotChain&) const = default;
};

inline constexpr std::size_t kMaxChains = 10'000;

/// Consequence graph: A -> B when an artifact produced in A's evidence is
/// consumed in B's and A precedes B by (earliest evidence seq, timestamp, id).
/// Chains are the source-to-sink paths, in a canonical order. A chain whose
/// evidence covers a memory scan, a file write and a data flow leaving its
/// segment is critical; otherwise it takes its highest member severity.
std::vector<PlotChain> correlate(const std::vector<Alert>& alerts, std::size_t max_chains = kMaxChains);

/// Checks that consecutive alerts of the chain share an artifact, using only the alerts.
bool chain_sound(const PlotChain& c, const std::vector<Alert>& alerts);

}  // namespace breachsim::alerts
