#include "breachsim/attack/phases.hpp"

namespace breachsim::attack {

namespace {

bool carries_pos_data(const sim::Flow& f, const sim::Topology& topo) {
  if (!f.payload) return false;
  for (const auto& blob : *f.payload) {
    const sim::Host* h = topo.find(blob.origin);
    if (h && h->role == sim::HostRole::PosTerminal) return true;
  }
  return false;
}

struct Ingest {
  AttackerState& s;
  const sim::Topology& topo;

  const sim::Host* host(const sim::HostId& id) const { return topo.find(id); }

  void operator()(const sim::CredentialTheft& e) const {
    s.stolen_credentials.insert(e.credential);
    s.controlled_hosts.insert(e.host);
    const sim::Host* h = host(e.host);
    if (h && h->role == sim::HostRole::Vendor) s.evidence.vendor_credential = true;
  }
  void operator()(const sim::AttackerAction& e) const {
    if (e.action == "create-account") s.stolen_credentials.insert(e.detail);
  }
  void operator()(const sim::ProcessStart& e) const {
    if (e.service) s.service_pids.emplace(e.host, sim::raw(e.pid));
  }
  void operator()(const sim::MemoryScan& e) const {
    const sim::Host* h = host(e.host);
    if (h && h->role == sim::HostRole::PosTerminal && s.service_pids.contains({e.host, sim::raw(e.scanner)})) {
      s.evidence.agent_scan = true;
    }
  }
  void operator()(const sim::FileWrite& e) const {
    const sim::Host* h = host(e.host);
    if (h && h->role == sim::HostRole::PosTerminal && e.writer && e.bytes > 0 &&
        s.service_pids.contains({e.host, sim::raw(*e.writer)})) {
      s.evidence.staged = true;
    }
  }
  void operator()(const sim::FlowRecord& e) const {
    if (e.outcome != sim::FlowOutcome::Delivered) return;
    const sim::Flow& f = e.flow;
    const sim::Host* src = host(f.src);
    const sim::Host* dst = host(f.dst);
    if (!src || !dst) return;
    if (f.credential && s.stolen_credentials.contains(*f.credential)) {
      s.controlled_hosts.insert(f.dst);
      if (dst->role == sim::HostRole::PosTerminal && src->segment != dst->segment) s.evidence.pos_access = true;
    }
    if (carries_pos_data(f, topo)) {
      if (dst->role == sim::HostRole::FileServer && dst->segment != sim::kExternalSegment) s.evidence.repo_upload = true;
      if (dst->role == sim::HostRole::ExternalDrop) s.evidence.drop_delivery = true;
    }
  }
  template <class T>
  void operator()(const T&) const {}
};

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::InitialInfection: return "initial-infection";
    case Phase::PosInfection: return "pos-infection";
    case Phase::DataCollection: return "data-collection";
    case Phase::Exfiltration: return "exfiltration";
    case Phase::Monetization: return "monetization";
  }
  return "?";
}

AttackerState advance_phase(AttackerState s, std::span<const sim::Event> log, const sim::Topology& topo) {
  for (; s.cursor < log.size(); ++s.cursor) std::visit(Ingest{s, topo}, log[s.cursor].payload);

  const PhaseEvidence& ev = s.evidence;
  switch (s.phase) {
    case Phase::InitialInfection:
      if (ev.vendor_credential && ev.pos_access) s.phase = Phase::PosInfection;
      break;
    case Phase::PosInfection:
      if (ev.agent_scan) s.phase = Phase::DataCollection;
      break;
    case Phase::DataCollection:
      if (ev.staged && ev.repo_upload) s.phase = Phase::Exfiltration;
      break;
    case Phase::Exfiltration:
      if (ev.drop_delivery) s.phase = Phase::Monetization;
      break;
    case Phase::Monetization:
      break;
  }
  return s;
}

}  // namespace breachsim::attack
