#pragma once

#include <array>
#include <span>

#include "breachsim/integrity/types.hpp"

namespace breachsim::integrity {

using Seed = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
std::string digest_hex(std::span<const std::uint8_t> data);

/// Deterministic key pair from 32 seed bytes.
KeyPair keypair_from_seed(const Seed& seed);

Signature sign(std::span<const std::uint8_t> message, const SecretKey& sk);
bool verify(const Signature& sig, std::span<const std::uint8_t> message, const PublicKey& pk);

}  // namespace breachsim::integrity
