#include "breachsim/sim/event.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"

namespace breachsim::sim {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::VendorPhish: return "vendor-phish";
    case EventKind::CredentialTheft: return "credential-theft";
    case EventKind::ExecRequest: return "exec-request";
    case EventKind::ProcessStart: return "process-start";
    case EventKind::MemoryScan: return "memory-scan";
    case EventKind::FileWrite: return "file-write";
    case EventKind::Flow: return "flow";
    case EventKind::AlertRaised: return "alert-raised";
    case EventKind::AttackerAction: return "attacker-action";
    case EventKind::SelfDestruct: return "self-destruct";
    case EventKind::SocAction: return "soc-action";
    case EventKind::CardSwipe: return "card-swipe";
    case EventKind::AlertNotify: return "alert-notify";
    case EventKind::Audit: return "audit";
  }
  return "?";
}

std::uint64_t payload_size(const Flow& f) {
  if (!f.payload) return f.bytes;
  std::uint64_t total = 0;
  for (const auto& blob : *f.payload) total += blob.bytes.size();
  return total;
}

namespace {

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json opt_pid(const std::optional<ProcessId>& v) {
  return v ? ordered_json(raw(*v)) : ordered_json(nullptr);
}

std::string fingerprint(const std::shared_ptr<const BlobList>& payload) {
  if (!payload) return "";
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& blob : *payload) h = fnv1a64(blob.bytes.data(), blob.bytes.size(), h);
  std::uint8_t raw_bytes[8];
  for (int i = 0; i < 8; ++i) raw_bytes[i] = static_cast<std::uint8_t>(h >> (56 - 8 * i));
  return to_hex(raw_bytes, 8);
}

struct Fields {
  ordered_json& j;

  void operator()(const VendorPhish& p) const {
    j["host"] = p.host.str();
    j["success"] = p.success;
  }
  void operator()(const CredentialTheft& p) const {
    j["host"] = p.host.str();
    j["credential"] = p.credential;
  }
  void operator()(const ExecRequest& p) const {
    j["host"] = p.host.str();
    j["label"] = p.label;
    j["digest"] = p.digest;
    j["signed"] = p.signed_binary;
    j["enforced"] = p.enforced;
    j["verdict"] = to_string(p.verdict);
    j["delivered_by"] = p.delivered_by ? ordered_json(raw(*p.delivered_by)) : ordered_json(nullptr);
  }
  void operator()(const ProcessStart& p) const {
    j["host"] = p.host.str();
    j["pid"] = raw(p.pid);
    j["name"] = p.name;
    j["digest"] = p.digest;
    j["service"] = opt(p.service);
  }
  void operator()(const MemoryScan& p) const {
    j["host"] = p.host.str();
    j["scanner"] = raw(p.scanner);
    j["target"] = raw(p.target);
    j["bytes_scanned"] = p.bytes_scanned;
    j["chunks"] = p.chunks;
    j["records"] = p.records;
    j["captured_bytes"] = p.captured_bytes;
  }
  void operator()(const FileWrite& p) const {
    j["host"] = p.host.str();
    j["writer"] = opt_pid(p.writer);
    j["path"] = p.path;
    j["bytes"] = p.bytes;
    j["records"] = p.records;
    if (p.content) {
      const std::uint64_t h = fnv1a64(p.content->data(), p.content->size());
      j["content_fnv"] = h;
    } else {
      j["content_fnv"] = nullptr;
    }
  }
  void operator()(const FlowRecord& p) const {
    const Flow& f = p.flow;
    j["flow"] = raw(p.id);
    j["src"] = f.src.str();
    j["dst"] = f.dst.str();
    j["channel"] = f.channel;
    j["bytes"] = payload_size(f);
    j["class"] = to_string(f.classification);
    j["credential"] = opt(f.credential);
    j["outcome"] = to_string(p.outcome);
    j["reason"] = p.reason;
    j["monitored"] = p.monitored;
    j["anomalous"] = p.anomalous;
    j["source_file"] = opt(f.source_file);
    j["dest_file"] = opt(f.dest_file);
    j["origin"] = opt_pid(f.origin_process);
    j["blobs"] = f.payload ? f.payload->size() : 0;
    j["payload_fnv"] = fingerprint(f.payload);
  }
  void operator()(const AlertRaised& p) const {
    j["alert"] = p.alert_id;
    j["detector"] = p.detector;
    j["type"] = p.alert_type;
    j["severity"] = to_string(p.severity);
    j["classtype"] = p.classtype;
    j["host"] = p.subject_host.str();
    j["msg"] = p.msg;
    j["evidence"] = p.evidence;
    j["channels"] = p.channels;
  }
  void operator()(const AttackerAction& p) const {
    j["action"] = p.action;
    j["host"] = p.host.str();
    j["detail"] = p.detail;
  }
  void operator()(const SelfDestruct& p) const {
    j["host"] = p.host.str();
    j["pid"] = raw(p.pid);
    j["reason"] = p.reason;
  }
  void operator()(const SocAction& p) const {
    j["action"] = p.action;
    j["host"] = p.host.str();
    j["alert"] = opt(p.alert_id);
    j["detail"] = p.detail;
  }
  void operator()(const CardSwipe& p) const {
    j["host"] = p.host.str();
    j["pid"] = raw(p.pid);
    j["cards"] = p.cards;
    j["tokenized"] = p.tokenized;
  }
  void operator()(const AlertNotify& p) const {
    j["alert"] = p.alert_id;
    j["from"] = to_string(p.from);
    j["to"] = to_string(p.to);
    j["reason"] = p.reason;
    j["channels"] = p.channels;
  }
  void operator()(const Audit& p) const {
    j["host"] = p.center.str();
    j["label"] = p.label;
    j["digest"] = p.digest;
    j["approved"] = p.approved;
    j["reason"] = p.reason;
  }
};

}  // namespace

std::string serialize_event(const Event& e) {
  ordered_json j;
  j["t"] = e.time;
  j["seq"] = e.seq;
  j["kind"] = to_string(e.kind());
  std::visit(Fields{j}, e.payload);
  return j.dump();
}

void write_log(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) out << serialize_event(e) << '\n';
}

std::string serialize_log(std::span<const Event> events) {
  std::ostringstream out;
  write_log(out, events);
  return out.str();
}

std::vector<HostId> referenced_hosts(const Event& e) {
  return std::visit(
      [](const auto& p) -> std::vector<HostId> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FlowRecord>) {
          return {p.flow.src, p.flow.dst};
        } else if constexpr (std::is_same_v<T, AlertRaised>) {
          return {p.subject_host};
        } else if constexpr (std::is_same_v<T, Audit>) {
          return {p.center};
        } else if constexpr (std::is_same_v<T, AlertNotify>) {
          return {};
        } else {
          return {p.host};
        }
      },
      e.payload);
}

}  // namespace breachsim::sim
