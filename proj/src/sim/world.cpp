#include "breachsim/sim/world.hpp"

namespace breachsim::sim {

namespace {

bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

// Mod-10 over a digit run. Kept local: sim_core sits below the payment module.
bool mod10(const std::uint8_t* d, std::size_t n) {
  int sum = 0;
  bool dbl = false;
  for (std::size_t i = n; i-- > 0;) {
    int v = d[i] - '0';
    if (dbl) {
      v *= 2;
      if (v > 9) v -= 9;
    }
    sum += v;
    dbl = !dbl;
  }
  return sum % 10 == 0;
}

bool has_pan_run(const Bytes& b) {
  std::size_t i = 0;
  while (i < b.size()) {
    if (!is_digit(b[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < b.size() && is_digit(b[j])) ++j;
    const std::size_t len = j - i;
    if (len >= 13 && len <= 19 && mod10(b.data() + i, len)) return true;
    i = j;
  }
  return false;
}

}  // namespace

Classification classify_payload(const BlobList& blobs) {
  bool any_encrypted = false;
  for (const auto& blob : blobs) {
    if (has_pan_run(blob.bytes)) return Classification::PlaintextPan;
    any_encrypted = any_encrypted || blob.encrypted;
  }
  return any_encrypted ? Classification::Ciphertext : Classification::Benign;
}

GateDecision OpenGate::admit(const FlowContext& ctx) {
  if (!ctx.routable) return {FlowOutcome::Denied, "not-routable", false, false};
  return {FlowOutcome::Delivered, "open", false, false};
}

World::World(Engine& engine, Topology topology) : engine_(engine), topology_(std::move(topology)) {}

FlowResult World::send_flow(Flow flow) {
  const Host& src = topology_.host(flow.src);
  const Host& dst = topology_.host(flow.dst);
  if (flow.src == flow.dst) throw InvalidFlow("flow src and dst are the same host: " + flow.src.str());
  if (flow.payload) {
    flow.bytes = payload_size(flow);
    flow.classification = classify_payload(*flow.payload);
  }
  if (flow.bytes == 0) throw InvalidFlow("flow carries no bytes");

  FlowContext ctx{flow, src, dst, topology_.adjacent(src.segment, dst.segment), false};
  ctx.credential_valid = flow.credential && topology_.credential_valid_for(*flow.credential, dst);
  GateDecision d = gate_->admit(ctx);

  FlowResult r;
  r.outcome = d.outcome;
  r.id = FlowId{next_flow_++};
  r.classification = flow.classification;
  const Event& e = engine_.emit(FlowRecord{r.id, std::move(flow), d.outcome, std::move(d.reason), d.monitored, d.anomalous});
  r.seq = e.seq;
  return r;
}

ProcessId World::spawn_process(const HostId& host, std::string name, std::string digest,
                               std::optional<std::string> service) {
  if (name.empty()) throw std::invalid_argument("process name must be non-empty");
  Host& h = topology_.host(host);
  const ProcessId pid{next_pid_++};
  Process p;
  p.id = pid;
  p.name = name;
  p.owner = host;
  p.digest = digest;
  p.service = service;
  h.processes.emplace(pid, std::move(p));
  engine_.emit(ProcessStart{host, pid, std::move(name), std::move(digest), std::move(service)});
  return pid;
}

bool World::kill_process(const HostId& host, ProcessId pid) {
  return topology_.host(host).processes.erase(pid) > 0;
}

Process* World::find_process(const HostId& host, ProcessId pid) {
  Host* h = topology_.find(host);
  if (!h) return nullptr;
  auto it = h->processes.find(pid);
  return it == h->processes.end() ? nullptr : &it->second;
}

const Event& World::write_file(const HostId& host, std::optional<ProcessId> writer, const std::string& path,
                               const Bytes& data, std::uint64_t records) {
  Host& h = topology_.host(host);
  if (writer && !h.processes.contains(*writer)) {
    throw std::invalid_argument("writer process not running on " + host.str());
  }
  auto& file = h.files[path];
  file.insert(file.end(), data.begin(), data.end());
  return engine_.emit(FileWrite{host, writer, path, data.size(), records, std::make_shared<const Bytes>(data)});
}

void World::delete_file(const HostId& host, const std::string& path) { topology_.host(host).files.erase(path); }

}  // namespace breachsim::sim
