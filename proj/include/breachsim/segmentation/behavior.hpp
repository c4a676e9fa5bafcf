#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "breachsim/sim/event.hpp"

namespace breachsim::segmentation {

/// Where each credential usually goes.
struct BehaviorProfile {
  struct History {
    std::uint64_t flows = 0;
    std::set<std::pair<sim::HostId, std::string>> seen;  ///< (dst, channel)
  };

  std::uint64_t warmup = 20;
  std::map<std::string, History> credentials;
};

enum class BehaviorVerdict { Normal, Anomalous };

/// After the credential's first `warmup` flows, a (dst, channel) pair outside
/// its history is anomalous. The pair is learned either way. Flows without a
/// credential are not profiled.
BehaviorVerdict check_behavior(BehaviorProfile& bp, const sim::Flow& f);

}  // namespace breachsim::segmentation
