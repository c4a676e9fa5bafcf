#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "breachsim/sim/vocab.hpp"

namespace breachsim::integrity {

using PublicKey = std::array<std::uint8_t, 32>;
using SecretKey = std::array<std::uint8_t, 64>;
using Signature = std::array<std::uint8_t, 64>;
using Digest = std::array<std::uint8_t, 32>;

/// Signing identity of the integrity center. The secret half stays in memory;
/// nothing in this project serializes it.
struct KeyPair {
  PublicKey pk{};
  SecretKey sk{};
};

/// Self-signed root: the signature covers (subject, pk) and verifies under pk.
struct Certificate {
  std::string subject;
  PublicKey pk{};
  Signature self_signature{};

  bool operator==(const Certificate&) const = default;
};

struct SignedBinary {
  sim::Bytes bytes;
  Digest digest{};
  Signature signature{};
  std::string signer_subject;

  bool operator==(const SignedBinary&) const = default;
};

/// Digests the integrity center has audited and approved, with labels.
struct AuditManifest {
  std::map<Digest, std::string> approved;

  bool contains(const Digest& d) const { return approved.contains(d); }
};

}  // namespace breachsim::integrity
