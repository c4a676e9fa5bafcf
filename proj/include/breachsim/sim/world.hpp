#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "breachsim/sim/engine.hpp"
#include "breachsim/sim/topology.hpp"

namespace breachsim::sim {

/// What the admission gate sees about a flow.
struct FlowContext {
  const Flow& flow;
  const Host& src;
  const Host& dst;
  bool routable = false;          ///< segments equal or adjacent in the topology
  bool credential_valid = false;  ///< flow credential is accepted by dst
};

struct GateDecision {
  FlowOutcome outcome = FlowOutcome::Denied;
  std::string reason;
  bool monitored = false;
  bool anomalous = false;
};

/// Flow admission. The segmentation module provides the real implementation.
class FlowGate {
 public:
  virtual ~FlowGate() = default;
  virtual GateDecision admit(const FlowContext& ctx) = 0;
};

/// Admits routable flows, monitors nothing.
class OpenGate final : public FlowGate {
 public:
  GateDecision admit(const FlowContext& ctx) override;
};

class InvalidFlow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FlowResult {
  FlowOutcome outcome = FlowOutcome::Denied;
  FlowId id{};
  std::uint64_t seq = 0;
  Classification classification = Classification::Benign;
  bool delivered() const noexcept { return outcome == FlowOutcome::Delivered; }
};

/// Classifies a payload by content: any Luhn-valid 13-19 digit run makes it
/// plaintext-pan; otherwise encrypted blobs make it ciphertext.
Classification classify_payload(const BlobList& blobs);

/// Host state plus the operations that change it and log the change.
class World {
 public:
  World(Engine& engine, Topology topology);

  Engine& engine() noexcept { return engine_; }
  const Topology& topology() const noexcept { return topology_; }
  Topology& topology() noexcept { return topology_; }

  void set_gate(FlowGate* gate) { gate_ = gate ? gate : &open_gate_; }

  /// Evaluates the flow against the gate and logs it, delivered or denied.
  /// Throws UnknownHost for missing endpoints and InvalidFlow for src == dst
  /// or an empty flow.
  FlowResult send_flow(Flow flow);

  ProcessId spawn_process(const HostId& host, std::string name, std::string digest,
                          std::optional<std::string> service = std::nullopt);
  /// Removes the process; returns false if it was not running.
  bool kill_process(const HostId& host, ProcessId pid);
  Process* find_process(const HostId& host, ProcessId pid);

  /// Appends to a file on a host and logs the write.
  const Event& write_file(const HostId& host, std::optional<ProcessId> writer, const std::string& path,
                          const Bytes& data, std::uint64_t records);
  void delete_file(const HostId& host, const std::string& path);

 private:
  Engine& engine_;
  Topology topology_;
  OpenGate open_gate_;
  FlowGate* gate_ = &open_gate_;
  std::uint32_t next_pid_ = 1;
  std::uint64_t next_flow_ = 1;
};

}  // namespace breachsim::sim
