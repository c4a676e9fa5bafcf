#include "breachsim/integrity/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace breachsim::integrity {

namespace {

void ensure_init() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  ensure_init();
  Digest d{};
  crypto_hash_sha256(d.data(), data.data(), data.size());
  return d;
}

std::string digest_hex(std::span<const std::uint8_t> data) { return sim::to_hex(sha256(data)); }

KeyPair keypair_from_seed(const Seed& seed) {
  ensure_init();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
  return kp;
}

Signature sign(std::span<const std::uint8_t> message, const SecretKey& sk) {
  ensure_init();
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
  return sig;
}

bool verify(const Signature& sig, std::span<const std::uint8_t> message, const PublicKey& pk) {
  ensure_init();
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), pk.data()) == 0;
}

}  // namespace breachsim::integrity
