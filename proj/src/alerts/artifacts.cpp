#include "breachsim/alerts/artifacts.hpp"

namespace breachsim::alerts {

std::string proc_key(const sim::HostId& h, sim::ProcessId pid) {
  return "proc:" + h.str() + "/" + std::to_string(sim::raw(pid));
}
std::string file_key(const sim::HostId& h, const std::string& path) { return "file:" + h.str() + "/" + path; }
std::string flow_key(sim::FlowId id) { return "flow:" + std::to_string(sim::raw(id)); }
std::string bin_key(const sim::HostId& h, const std::string& digest) { return "bin:" + h.str() + "/" + digest; }

namespace {

struct Collect {
  EvidenceRef& ev;
  const sim::Topology& topo;

  void operator()(const sim::ExecRequest& e) const {
    if (e.delivered_by) ev.consumes.push_back(flow_key(*e.delivered_by));
    if (e.verdict == sim::ExecVerdict::Executed) ev.produces.push_back(bin_key(e.host, e.digest));
  }
  void operator()(const sim::ProcessStart& e) const {
    ev.consumes.push_back(bin_key(e.host, e.digest));
    ev.produces.push_back(proc_key(e.host, e.pid));
  }
  void operator()(const sim::MemoryScan& e) const {
    ev.consumes.push_back(proc_key(e.host, e.scanner));
    ev.consumes.push_back(proc_key(e.host, e.target));
  }
  void operator()(const sim::FileWrite& e) const {
    if (e.writer) ev.consumes.push_back(proc_key(e.host, *e.writer));
    ev.produces.push_back(file_key(e.host, e.path));
  }
  void operator()(const sim::FlowRecord& e) const {
    const sim::Flow& f = e.flow;
    if (f.origin_process) ev.consumes.push_back(proc_key(f.src, *f.origin_process));
    if (f.source_file) ev.consumes.push_back(file_key(f.src, *f.source_file));
    ev.produces.push_back(flow_key(e.id));
    const bool delivered = e.outcome == sim::FlowOutcome::Delivered;
    if (delivered && f.dest_file) ev.produces.push_back(file_key(f.dst, *f.dest_file));
    const sim::Host* s = topo.find(f.src);
    const sim::Host* d = topo.find(f.dst);
    if (delivered && f.payload && s && d && s->segment != d->segment) ev.kind = std::string(kFlowEgress);
  }
  void operator()(const sim::SelfDestruct& e) const { ev.consumes.push_back(proc_key(e.host, e.pid)); }
  template <class T>
  void operator()(const T&) const {}
};

}  // namespace

EvidenceRef make_evidence(const sim::Event& e, const sim::Topology& topo) {
  EvidenceRef ev;
  ev.seq = e.seq;
  ev.kind = std::string(sim::to_string(e.kind()));
  std::visit(Collect{ev, topo}, e.payload);
  return ev;
}

}  // namespace breachsim::alerts
