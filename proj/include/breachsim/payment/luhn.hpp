#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace breachsim::payment {

/// Mod-10 check. Non-digits or fewer than 13 digits fail.
bool luhn_valid(std::string_view pan);

/// Check digit that makes `partial` + digit Luhn-valid. `partial` must be all digits.
char luhn_check_digit(std::string_view partial);

struct DigitRun {
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Maximal digit runs of length 13-19 that pass the mod-10 check.
std::vector<DigitRun> find_pan_runs(std::span<const std::uint8_t> bytes);

inline bool contains_pan(std::span<const std::uint8_t> bytes) { return !find_pan_runs(bytes).empty(); }

}  // namespace breachsim::payment
