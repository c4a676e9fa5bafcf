#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "breachsim/integrity/types.hpp"
#include "breachsim/sim/rng.hpp"
#include "breachsim/sim/world.hpp"

namespace breachsim::integrity {

struct Identity {
  KeyPair keys;
  Certificate cert;
};

/// Fresh key pair (seeded from `rng`) and a self-signed certificate for `subject`.
Identity generate_identity(const std::string& subject, sim::Rng& rng);

bool certificate_valid(const Certificate& cert);

class WrongRole : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Installs `cert` as a trusted root on a POS terminal. Idempotent.
void provision_terminal(sim::Host& host, const Certificate& cert);

class AuditReject : public std::runtime_error {
 public:
  AuditReject(Digest digest, std::string reason);
  const Digest& digest() const noexcept { return digest_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  Digest digest_;
  std::string reason_;
};

/// Signs `bytes` if their digest is in the manifest; throws AuditReject otherwise.
SignedBinary audit_and_sign(const sim::Bytes& bytes, const AuditManifest& manifest, const KeyPair& keys,
                            const std::string& signer_subject);

/// What arrives at a terminal: either a signed package or raw bytes.
using Executable = std::variant<sim::Bytes, SignedBinary>;

const sim::Bytes& image_of(const Executable& exe);

/// Pure verification against the host's root certificates, ignoring whether
/// enforcement is switched on.
sim::ExecVerdict check_executable(const sim::Host& host, const Executable& exe);

struct ExecSpec {
  std::string label;
  std::string process_name;
  std::optional<std::string> service;
  std::optional<sim::FlowId> delivered_by;
};

struct ExecOutcome {
  sim::ExecVerdict verdict = sim::ExecVerdict::Executed;
  std::optional<sim::ProcessId> pid;
  bool executed() const noexcept { return verdict == sim::ExecVerdict::Executed; }
};

/// Terminal-side enforcement. Logs an exec-request with the verdict; an
/// Executed verdict also installs the binary and starts a process. Hosts
/// without enforcement run whatever they are given.
ExecOutcome verify_and_execute(sim::World& world, const sim::HostId& host, const Executable& exe,
                               const ExecSpec& spec);

/// "<len>\n<bytes>\n<digest hex>\n<signature hex>\n<subject>\n"
std::string serialize_signed(const SignedBinary& b);
/// Throws std::invalid_argument on malformed input.
SignedBinary parse_signed(std::string_view text);

/// The merchant's signing authority: holds the key pair and the audit
/// manifest and logs every audit decision.
class IntegrityCenter {
 public:
  IntegrityCenter(sim::HostId host, Identity identity);

  const sim::HostId& host() const noexcept { return host_; }
  const Certificate& certificate() const noexcept { return identity_.cert; }
  const AuditManifest& manifest() const noexcept { return manifest_; }

  void approve(const sim::Bytes& bytes, const std::string& label);

  /// Audits and signs; logs an audit event either way. nullopt when rejected.
  std::optional<SignedBinary> submit(sim::Engine& engine, const sim::Bytes& bytes, const std::string& label);

 private:
  sim::HostId host_;
  Identity identity_;
  AuditManifest manifest_;
};

}  // namespace breachsim::integrity
