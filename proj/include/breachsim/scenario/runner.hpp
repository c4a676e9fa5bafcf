#pragma once

#include <cstdint>

#include "breachsim/scenario/config.hpp"
#include "breachsim/scenario/report.hpp"
#include "breachsim/sim/event.hpp"

namespace breachsim::scenario {

struct RunOutput {
  sim::EventLog log;
  Report report;
};

/// Builds the world from `cfg`, plays the attack plan and the defenses
/// until cfg.duration, and reports on the log.
RunOutput simulate(const ScenarioConfig& cfg, std::uint64_t seed);

Report run_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace breachsim::scenario
