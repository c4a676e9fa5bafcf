#include "breachsim/integrity/integrity.hpp"

#include <algorithm>
#include <charconv>

#include "breachsim/integrity/crypto.hpp"

namespace breachsim::integrity {

namespace {

sim::Bytes cert_message(const std::string& subject, const PublicKey& pk) {
  sim::Bytes m(subject.begin(), subject.end());
  m.push_back(0);
  m.insert(m.end(), pk.begin(), pk.end());
  return m;
}

template <std::size_t N>
bool hex_into(std::string_view hex, std::array<std::uint8_t, N>& out) {
  auto bytes = sim::from_hex(hex);
  if (!bytes || bytes->size() != N) return false;
  std::copy(bytes->begin(), bytes->end(), out.begin());
  return true;
}

}  // namespace

Identity generate_identity(const std::string& subject, sim::Rng& rng) {
  Seed seed{};
  rng.fill(seed);
  Identity id;
  id.keys = keypair_from_seed(seed);
  id.cert.subject = subject;
  id.cert.pk = id.keys.pk;
  id.cert.self_signature = sign(cert_message(subject, id.keys.pk), id.keys.sk);
  return id;
}

bool certificate_valid(const Certificate& cert) {
  return verify(cert.self_signature, cert_message(cert.subject, cert.pk), cert.pk);
}

void provision_terminal(sim::Host& host, const Certificate& cert) {
  if (host.role != sim::HostRole::PosTerminal) {
    throw WrongRole("cannot provision " + host.id.str() + ": role is " + std::string(sim::to_string(host.role)));
  }
  if (std::find(host.root_certs.begin(), host.root_certs.end(), cert) == host.root_certs.end()) {
    host.root_certs.push_back(cert);
  }
}

AuditReject::AuditReject(Digest digest, std::string reason)
    : std::runtime_error("audit rejected " + sim::to_hex(digest) + ": " + reason),
      digest_(digest),
      reason_(std::move(reason)) {}

SignedBinary audit_and_sign(const sim::Bytes& bytes, const AuditManifest& manifest, const KeyPair& keys,
                            const std::string& signer_subject) {
  const Digest d = sha256(bytes);
  if (!manifest.contains(d)) throw AuditReject(d, "digest not in audit manifest");
  SignedBinary out;
  out.bytes = bytes;
  out.digest = d;
  out.signature = sign(d, keys.sk);
  out.signer_subject = signer_subject;
  return out;
}

const sim::Bytes& image_of(const Executable& exe) {
  if (const auto* raw = std::get_if<sim::Bytes>(&exe)) return *raw;
  return std::get<SignedBinary>(exe).bytes;
}

sim::ExecVerdict check_executable(const sim::Host& host, const Executable& exe) {
  const auto* sb = std::get_if<SignedBinary>(&exe);
  if (!sb) return sim::ExecVerdict::RejectedUnsigned;
  auto root = std::find_if(host.root_certs.begin(), host.root_certs.end(),
                           [&](const Certificate& c) { return c.subject == sb->signer_subject; });
  if (root == host.root_certs.end()) return sim::ExecVerdict::RejectedUntrustedSigner;
  if (sha256(sb->bytes) != sb->digest) return sim::ExecVerdict::RejectedTampered;
  if (!verify(sb->signature, sb->digest, root->pk)) return sim::ExecVerdict::RejectedTampered;
  return sim::ExecVerdict::Executed;
}

ExecOutcome verify_and_execute(sim::World& world, const sim::HostId& host_id, const Executable& exe,
                               const ExecSpec& spec) {
  sim::Host& host = world.topology().host(host_id);
  const sim::Bytes& image = image_of(exe);
  const bool is_signed = std::holds_alternative<SignedBinary>(exe);
  const std::string digest = digest_hex(image);

  ExecOutcome out;
  out.verdict = host.integrity_enforced ? check_executable(host, exe) : sim::ExecVerdict::Executed;

  auto shared_image = std::make_shared<const sim::Bytes>(image);
  world.engine().emit(sim::ExecRequest{host_id, spec.label, digest, is_signed, host.integrity_enforced,
                                       out.verdict, spec.delivered_by, shared_image});
  if (!out.executed()) return out;

  host.binaries.push_back(sim::InstalledBinary{
      spec.label, digest, is_signed ? sim::SignatureState::Signed : sim::SignatureState::Unsigned, shared_image});
  out.pid = world.spawn_process(host_id, spec.process_name, digest, spec.service);
  return out;
}

std::string serialize_signed(const SignedBinary& b) {
  std::string out = std::to_string(b.bytes.size());
  out += '\n';
  out.append(b.bytes.begin(), b.bytes.end());
  out += '\n';
  out += sim::to_hex(b.digest);
  out += '\n';
  out += sim::to_hex(b.signature);
  out += '\n';
  out += b.signer_subject;
  out += '\n';
  return out;
}

SignedBinary parse_signed(std::string_view text) {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("signed binary: ") + what); };
  const auto nl = text.find('\n');
  if (nl == std::string_view::npos) fail("missing length line");
  std::size_t len = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + nl, len);
  if (ec != std::errc{} || ptr != text.data() + nl || nl == 0) fail("bad length");
  std::size_t pos = nl + 1;
  if (text.size() < pos + len + 1 || text[pos + len] != '\n') fail("truncated body");

  SignedBinary b;
  b.bytes.assign(text.begin() + static_cast<std::ptrdiff_t>(pos), text.begin() + static_cast<std::ptrdiff_t>(pos + len));
  pos += len + 1;

  auto next_line = [&]() {
    const auto end = text.find('\n', pos);
    if (end == std::string_view::npos) fail("missing line");
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    return line;
  };
  if (!hex_into(next_line(), b.digest)) fail("bad digest");
  if (!hex_into(next_line(), b.signature)) fail("bad signature");
  b.signer_subject = std::string(next_line());
  if (pos != text.size()) fail("trailing data");
  return b;
}

IntegrityCenter::IntegrityCenter(sim::HostId host, Identity identity)
    : host_(std::move(host)), identity_(std::move(identity)) {}

void IntegrityCenter::approve(const sim::Bytes& bytes, const std::string& label) {
  manifest_.approved[sha256(bytes)] = label;
}

std::optional<SignedBinary> IntegrityCenter::submit(sim::Engine& engine, const sim::Bytes& bytes,
                                                   const std::string& label) {
  try {
    SignedBinary sb = audit_and_sign(bytes, manifest_, identity_.keys, identity_.cert.subject);
    engine.emit(sim::Audit{host_, label, sim::to_hex(sb.digest), true, "approved"});
    return sb;
  } catch (const AuditReject& r) {
    engine.emit(sim::Audit{host_, label, sim::to_hex(r.digest()), false, r.reason()});
    return std::nullopt;
  }
}

}  // namespace breachsim::integrity
