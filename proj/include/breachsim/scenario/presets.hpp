#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "breachsim/scenario/config.hpp"

namespace breachsim::scenario {

class UnknownPreset : public std::invalid_argument {
 public:
  explicit UnknownPreset(const std::string& name) : std::invalid_argument("unknown preset: " + name) {}
};

/// The 2013 retailer breach as it happened: flat VLANs, no code signing,
/// alerts ignored, obfuscated + encrypted scraper on 100 terminals.
ScenarioConfig target_2013();

/// Same network, card pool and attack plan with every defense switched on.
ScenarioConfig hardened();

std::vector<std::string> preset_names();
ScenarioConfig preset(std::string_view name);

}  // namespace breachsim::scenario
