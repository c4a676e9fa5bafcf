#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "breachsim/sim/vocab.hpp"

namespace breachsim::sim {

/// A run of bytes moved by a flow. Data blobs carry the origin host and the
/// keystream offset they were staged at so an owner of the key can decrypt
/// them anywhere along the exfiltration path.
struct DataBlob {
  HostId origin;
  std::uint64_t stream_offset = 0;
  bool encrypted = false;
  Bytes bytes;
};

using BlobList = std::vector<DataBlob>;

/// A request to move data between two hosts.
struct Flow {
  HostId src;
  HostId dst;
  std::string channel;
  std::uint64_t bytes = 0;  ///< Ignored when a payload is attached; derived from it instead.
  Classification classification = Classification::Benign;
  std::optional<std::string> credential;
  std::shared_ptr<const BlobList> payload;
  std::optional<std::string> source_file;  ///< File on src the payload was read from.
  std::optional<std::string> dest_file;    ///< File on dst the payload lands in.
  std::optional<ProcessId> origin_process;
};

// ---- event payloads --------------------------------------------------------

struct VendorPhish {
  HostId host;
  bool success = false;
};

struct CredentialTheft {
  HostId host;
  std::string credential;
};

struct ExecRequest {
  HostId host;
  std::string label;
  std::string digest;  ///< hex SHA-256 of the image
  bool signed_binary = false;
  bool enforced = false;
  ExecVerdict verdict = ExecVerdict::Executed;
  std::optional<FlowId> delivered_by;
  std::shared_ptr<const Bytes> image;
};

struct ProcessStart {
  HostId host;
  ProcessId pid{};
  std::string name;
  std::string digest;
  std::optional<std::string> service;  ///< set when the process registered itself as a service
};

struct MemoryScan {
  HostId host;
  ProcessId scanner{};
  ProcessId target{};
  std::uint64_t bytes_scanned = 0;
  std::uint64_t chunks = 0;
  std::uint64_t records = 0;
  std::uint64_t captured_bytes = 0;
};

struct FileWrite {
  HostId host;
  std::optional<ProcessId> writer;
  std::string path;
  std::uint64_t bytes = 0;
  std::uint64_t records = 0;
  std::shared_ptr<const Bytes> content;  ///< the bytes appended by this write
};

struct FlowRecord {
  FlowId id{};
  Flow flow;
  FlowOutcome outcome = FlowOutcome::Denied;
  std::string reason;
  bool monitored = false;
  bool anomalous = false;
};

struct AlertRaised {
  std::uint64_t alert_id = 0;
  std::string detector;
  std::string alert_type;
  Severity severity = Severity::Info;
  std::string classtype;
  HostId subject_host;
  std::string msg;
  std::vector<std::uint64_t> evidence;  ///< seqs of the supporting events
  std::vector<std::string> channels;
};

struct AttackerAction {
  std::string action;
  HostId host;
  std::string detail;
};

struct SelfDestruct {
  HostId host;
  ProcessId pid{};
  std::string reason;
};

struct SocAction {
  std::string action;
  HostId host;
  std::optional<std::uint64_t> alert_id;
  std::string detail;
};

struct CardSwipe {
  HostId host;
  ProcessId pid{};
  std::vector<std::uint32_t> cards;  ///< indices into the scenario card pool
  bool tokenized = false;
};

struct AlertNotify {
  std::uint64_t alert_id = 0;
  Severity from = Severity::Info;
  Severity to = Severity::Info;
  std::string reason;
  std::vector<std::string> channels;
};

struct Audit {
  HostId center;
  std::string label;
  std::string digest;
  bool approved = false;
  std::string reason;
};

using EventPayload = std::variant<VendorPhish, CredentialTheft, ExecRequest, ProcessStart, MemoryScan,
                                  FileWrite, FlowRecord, AlertRaised, AttackerAction, SelfDestruct,
                                  SocAction, CardSwipe, AlertNotify, Audit>;

enum class EventKind {
  VendorPhish,
  CredentialTheft,
  ExecRequest,
  ProcessStart,
  MemoryScan,
  FileWrite,
  Flow,
  AlertRaised,
  AttackerAction,
  SelfDestruct,
  SocAction,
  CardSwipe,
  AlertNotify,
  Audit,
};

std::string_view to_string(EventKind kind);

/// A logged simulation fact. Ordered totally by (time, seq).
struct Event {
  Minutes time = 0;
  std::uint64_t seq = 0;
  EventPayload payload;

  EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&payload);
  }
};

using EventLog = std::vector<Event>;

/// One line per event, fixed field order, no trailing newline.
std::string serialize_event(const Event& e);

/// Writes one serialized event per line.
void write_log(std::ostream& out, std::span<const Event> events);
std::string serialize_log(std::span<const Event> events);

/// Host ids an event refers to (for referential-integrity checks).
std::vector<HostId> referenced_hosts(const Event& e);

/// Sum of payload bytes, or nominal bytes when there is no payload.
std::uint64_t payload_size(const Flow& f);

}  // namespace breachsim::sim
