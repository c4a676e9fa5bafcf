#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "breachsim/sim/event.hpp"

namespace breachsim::attack {

using AgentKey = std::array<std::uint8_t, 32>;

/// Length-preserving keystream cipher for staged loot. The keystream is
/// selected by the origin host and the byte offset in that host's staging
/// stream, so any blob can be decrypted on its own. Encrypt and decrypt are
/// the same operation.
void apply_keystream(const AgentKey& key, const sim::HostId& origin, std::uint64_t stream_offset,
                     std::span<std::uint8_t> data);

/// Plaintext of a blob (copy if it was never encrypted).
sim::Bytes decrypt_blob(const AgentKey& key, const sim::DataBlob& blob);

}  // namespace breachsim::attack
