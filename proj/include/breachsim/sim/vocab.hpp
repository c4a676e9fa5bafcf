#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace breachsim::sim {

/// Simulation time in whole minutes since the scenario epoch.
using Minutes = std::int64_t;

inline constexpr Minutes kMinutesPerHour = 60;
inline constexpr Minutes kMinutesPerDay = 24 * kMinutesPerHour;

using Bytes = std::vector<std::uint8_t>;

/// Name of the segment that holds attacker drop sites.
inline constexpr std::string_view kExternalSegment = "external";

struct HostId {
  std::string value;

  HostId() = default;
  explicit HostId(std::string v) : value(std::move(v)) {}

  const std::string& str() const noexcept { return value; }
  bool empty() const noexcept { return value.empty(); }

  auto operator<=>(const HostId&) const = default;
};

enum class ProcessId : std::uint32_t {};
enum class FlowId : std::uint64_t {};

inline std::uint32_t raw(ProcessId id) { return static_cast<std::uint32_t>(id); }
inline std::uint64_t raw(FlowId id) { return static_cast<std::uint64_t>(id); }

enum class HostRole {
  PosTerminal,
  BusinessServer,
  FileServer,
  ExternalDrop,
  IntegrityCenter,
  SocConsole,
  Vendor,
};

enum class Classification { PlaintextPan, Ciphertext, Benign };

enum class FlowOutcome { Delivered, Denied };

/// Ordered alert severity scale.
enum class Severity { Info = 0, Minor = 1, Major = 2, Critical = 3 };

enum class ExecVerdict { Executed, RejectedUnsigned, RejectedTampered, RejectedUntrustedSigner };

std::string_view to_string(HostRole role);
std::string_view to_string(Classification c);
std::string_view to_string(FlowOutcome o);
std::string_view to_string(Severity s);
std::string_view to_string(ExecVerdict v);

std::optional<HostRole> parse_host_role(std::string_view s);
std::optional<Severity> parse_severity(std::string_view s);

std::string to_hex(const std::uint8_t* data, std::size_t size);

template <class Container>
std::string to_hex(const Container& c) {
  return to_hex(reinterpret_cast<const std::uint8_t*>(c.data()), c.size());
}

std::optional<Bytes> from_hex(std::string_view hex);

/// FNV-1a over a byte range; used to fingerprint payloads in serialized logs.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace breachsim::sim
