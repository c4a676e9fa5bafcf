#include "breachsim/sim/vocab.hpp"

#include <array>

namespace breachsim::sim {

std::string_view to_string(HostRole role) {
  switch (role) {
    case HostRole::PosTerminal: return "pos-terminal";
    case HostRole::BusinessServer: return "business-server";
    case HostRole::FileServer: return "file-server";
    case HostRole::ExternalDrop: return "external-drop";
    case HostRole::IntegrityCenter: return "integrity-center";
    case HostRole::SocConsole: return "soc-console";
    case HostRole::Vendor: return "vendor";
  }
  return "?";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::PlaintextPan: return "plaintext-pan";
    case Classification::Ciphertext: return "ciphertext";
    case Classification::Benign: return "benign";
  }
  return "?";
}

std::string_view to_string(FlowOutcome o) {
  return o == FlowOutcome::Delivered ? "delivered" : "denied";
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Minor: return "minor";
    case Severity::Major: return "major";
    case Severity::Critical: return "critical";
  }
  return "?";
}

std::string_view to_string(ExecVerdict v) {
  switch (v) {
    case ExecVerdict::Executed: return "executed";
    case ExecVerdict::RejectedUnsigned: return "rejected-unsigned";
    case ExecVerdict::RejectedTampered: return "rejected-tampered";
    case ExecVerdict::RejectedUntrustedSigner: return "rejected-untrusted-signer";
  }
  return "?";
}

std::optional<HostRole> parse_host_role(std::string_view s) {
  constexpr std::array roles{HostRole::PosTerminal,     HostRole::BusinessServer, HostRole::FileServer,
                             HostRole::ExternalDrop,    HostRole::IntegrityCenter, HostRole::SocConsole,
                             HostRole::Vendor};
  for (auto r : roles) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view s) {
  for (auto sev : {Severity::Info, Severity::Minor, Severity::Major, Severity::Critical}) {
    if (to_string(sev) == s) return sev;
  }
  return std::nullopt;
}

std::string to_hex(const std::uint8_t* data, std::size_t size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0x0f]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x00000100000001b3ull;
  }
  return hash;
}

}  // namespace breachsim::sim
