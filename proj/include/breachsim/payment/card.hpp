#pragma once

#include <string>

#include "breachsim/sim/rng.hpp"

namespace breachsim::payment {

inline constexpr std::size_t kMaxTrack2 = 37;
inline constexpr std::size_t kMaxFramedTrack = kMaxTrack2 + 2;  // start + end sentinels

struct CardRecord {
  std::string pan;            ///< 16 digits, Luhn-valid
  std::string expiry;         ///< YYMM
  std::string service_code;   ///< 3 digits
  std::string discretionary;  ///< issuer digits after the service code

  /// "PAN=YYMMSSS..." as read from the stripe.
  std::string track2() const { return pan + "=" + expiry + service_code + discretionary; }

  bool operator==(const CardRecord&) const = default;
};

/// Track 2 with its sentinels, as it sits in reader buffers: ";" track2 "?".
inline std::string framed_track(const CardRecord& c) { return ";" + c.track2() + "?"; }

/// Synthetic card: Visa (4) or Mastercard (51-55) prefix, random body, Luhn check digit.
CardRecord generate_card(sim::Rng& rng);

}  // namespace breachsim::payment
