#include "breachsim/attack/staging_cipher.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace breachsim::attack {

namespace {

constexpr std::uint64_t kBlock = 64;

std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce_for(const sim::HostId& origin) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  std::array<std::uint8_t, crypto_hash_sha256_BYTES> h{};
  crypto_hash_sha256(h.data(), reinterpret_cast<const unsigned char*>(origin.str().data()), origin.str().size());
  std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> n{};
  std::memcpy(n.data(), h.data(), n.size());
  return n;
}

}  // namespace

void apply_keystream(const AgentKey& key, const sim::HostId& origin, std::uint64_t stream_offset,
                     std::span<std::uint8_t> data) {
  if (data.empty()) return;
  const auto nonce = nonce_for(origin);
  // align to a keystream block: pad in front, xor, drop the pad
  const std::uint64_t lead = stream_offset % kBlock;
  sim::Bytes buf(lead + data.size(), 0);
  std::memcpy(buf.data() + lead, data.data(), data.size());
  crypto_stream_chacha20_xor_ic(buf.data(), buf.data(), buf.size(), nonce.data(), stream_offset / kBlock,
                                key.data());
  std::memcpy(data.data(), buf.data() + lead, data.size());
}

sim::Bytes decrypt_blob(const AgentKey& key, const sim::DataBlob& blob) {
  sim::Bytes out = blob.bytes;
  if (blob.encrypted) apply_keystream(key, blob.origin, blob.stream_offset, out);
  return out;
}

}  // namespace breachsim::attack
