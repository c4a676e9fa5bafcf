#include "breachsim/scenario/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "breachsim/alerts/artifacts.hpp"
#include "breachsim/attack/blackpos.hpp"
#include "breachsim/attack/staging_cipher.hpp"
#include "breachsim/attack/track_scanner.hpp"
#include "breachsim/payment/luhn.hpp"
#include "json.hpp"

namespace breachsim::scenario {

using json = nlohmann::ordered_json;

namespace {

const sim::Event* by_seq(std::span<const sim::Event> log, std::uint64_t seq) {
  if (seq < log.size() && log[seq].seq == seq) return &log[seq];
  auto it = std::lower_bound(log.begin(), log.end(), seq, [](const sim::Event& e, std::uint64_t s) { return e.seq < s; });
  return it != log.end() && it->seq == seq ? &*it : nullptr;
}

bool pos_origin(const sim::Flow& f, const sim::Topology& topo) {
  if (!f.payload) return false;
  return std::any_of(f.payload->begin(), f.payload->end(), [&](const sim::DataBlob& b) {
    const sim::Host* h = topo.find(b.origin);
    return h && h->role == sim::HostRole::PosTerminal;
  });
}

struct Loot {
  std::uint64_t records = 0;
  std::uint64_t pans = 0;
};

Loot open_payload(const attack::AgentKey& key, const sim::BlobList& blobs) {
  Loot l;
  for (const auto& b : blobs) {
    const sim::Bytes plain = attack::decrypt_blob(key, b);
    l.records += attack::scan_tracks(plain).size();
    l.pans += payment::find_pan_runs(plain).size();
  }
  return l;
}

class Timeline {
 public:
  void mark(const char* name, const sim::Event& e) {
    if (seen_.insert(name).second) hits_.push_back({name, e.time, e.seq});
  }
  bool has(const char* name) const { return seen_.contains(name); }
  std::vector<Milestone> sorted() {
    std::sort(hits_.begin(), hits_.end(), [](const Milestone& a, const Milestone& b) { return a.seq < b.seq; });
    return hits_;
  }

 private:
  std::set<std::string> seen_;
  std::vector<Milestone> hits_;
};

std::optional<std::uint64_t> flow_ref(const std::string& detail) {
  if (detail.rfind("flow:", 0) != 0) return std::nullopt;
  try {
    return std::stoull(detail.substr(5));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<Milestone> Report::milestone(std::string_view name) const {
  for (const auto& m : milestones) {
    if (m.name == name) return m;
  }
  return std::nullopt;
}

std::vector<alerts::Alert> alerts_from_log(std::span<const sim::Event> log, const sim::Topology& topo) {
  std::vector<alerts::Alert> out;
  for (const auto& e : log) {
    const auto* r = e.as<sim::AlertRaised>();
    if (!r) continue;
    alerts::Alert a;
    a.id = r->alert_id;
    a.timestamp = e.time;
    a.detector = r->detector;
    a.alert_type = r->alert_type;
    a.severity = r->severity;
    a.classtype = r->classtype;
    a.msg = r->msg;
    a.display_msg = r->msg;
    a.subject_host = r->subject_host;
    a.last_notified = e.time;
    for (auto seq : r->evidence) {
      if (const sim::Event* ev = by_seq(log, seq)) a.evidence.push_back(alerts::make_evidence(*ev, topo));
    }
    out.push_back(std::move(a));
  }
  return out;
}

Report compute_report(const ScenarioConfig& cfg, std::uint64_t seed, std::span<const sim::Event> log) {
  Report r;
  r.scenario = cfg.name;
  r.seed = seed;
  r.epoch = cfg.epoch;
  r.duration = cfg.duration;
  r.events = log.size();

  const sim::Topology topo = build_topology(cfg);
  const attack::BlackPosAgent& agent = cfg.agent.agent;
  const std::size_t pos_total = topo.hosts_with_role(sim::HostRole::PosTerminal).size();

  std::set<std::pair<sim::HostId, std::uint32_t>> attacker_procs;
  std::set<sim::HostId> infected_pos;
  std::map<std::uint64_t, bool> flow_delivered;
  Timeline tl;

  auto is_external = [&](const sim::HostId& h) {
    const sim::Host* host = topo.find(h);
    return host && host->segment == sim::kExternalSegment;
  };

  for (const auto& e : log) {
    if (const auto* p = e.as<sim::CredentialTheft>()) {
      const sim::Host* h = topo.find(p->host);
      if (h && h->role == sim::HostRole::Vendor) tl.mark("vendor-compromise", e);
    } else if (const auto* p = e.as<sim::AttackerAction>()) {
      if (p->action == "break-in") {
        auto id = flow_ref(p->detail);
        if (id && flow_delivered[*id]) tl.mark("network-break-in", e);
      }
    } else if (const auto* p = e.as<sim::MemoryScan>()) {
      r.records_scraped += p->records;
      r.bytes_scraped += p->captured_bytes;
      tl.mark("collection-start", e);
    } else if (const auto* p = e.as<sim::ProcessStart>()) {
      if (p->service && *p->service == agent.service_name) {
        attacker_procs.insert({p->host, sim::raw(p->pid)});
        const sim::Host* h = topo.find(p->host);
        if (h && h->role == sim::HostRole::PosTerminal) infected_pos.insert(p->host);
        if (pos_total > 0 && infected_pos.size() == pos_total) tl.mark("pos-malware-installed", e);
      }
      if (p->name == agent.exfil_process) {
        attacker_procs.insert({p->host, sim::raw(p->pid)});
        tl.mark("exfil-malware-installed", e);
      }
    } else if (const auto* p = e.as<sim::ExecRequest>()) {
      ++r.exec_verdicts[std::string(sim::to_string(p->verdict))];
    } else if (const auto* p = e.as<sim::FlowRecord>()) {
      const sim::Flow& f = p->flow;
      const bool delivered = p->outcome == sim::FlowOutcome::Delivered;
      flow_delivered[sim::raw(p->id)] = delivered;
      ++r.flows_attempted;
      ++(delivered ? r.flows_delivered : r.flows_denied);
      if (p->monitored) ++r.monitor_records;
      if (f.origin_process && attacker_procs.contains({f.src, sim::raw(*f.origin_process)})) {
        ++r.agent_flows;
        if (!attack::in_office_hours(agent, e.time)) ++r.agent_flows_outside_hours;
      }
      if (!delivered) continue;
      const sim::Host* dst = topo.find(f.dst);
      if (dst && dst->role == sim::HostRole::FileServer && pos_origin(f, topo)) {
        r.bytes_staged += sim::payload_size(f);
        r.records_staged += open_payload(agent.key, *f.payload).records;
      }
      if (is_external(f.dst) && !is_external(f.src)) {
        r.bytes_exfiltrated += f.bytes;
        if (f.payload) {
          const Loot l = open_payload(agent.key, *f.payload);
          r.records_exfiltrated += l.records;
          r.loot_pans += l.pans;
          tl.mark("exfiltration-start", e);
        }
      }
    } else if (const auto* p = e.as<sim::AlertRaised>()) {
      ++r.alerts_total;
      ++r.alerts_by_severity[std::string(sim::to_string(p->severity))];
      ++r.alerts_by_detector[p->detector];
      if (!r.first_alert_time) r.first_alert_time = e.time;
      if (p->alert_type == "malware-object") {
        tl.mark("first-alerts", e);
        if (tl.has("exfiltration-start")) tl.mark("additional-alerts", e);
      }
    } else if (const auto* p = e.as<sim::AlertNotify>()) {
      ++(p->reason == "reminder" ? r.reminders : r.escalations);
    } else if (const auto* p = e.as<sim::SocAction>()) {
      ++r.soc_actions;
      if (!r.detection_time) r.detection_time = e.time;
      if (p->action == "external-notification") tl.mark("external-notification", e);
      if (p->action == "remove-malware") tl.mark("malware-removal", e);
    }
  }
  r.milestones = tl.sorted();
  if (auto b = r.milestone("network-break-in")) r.breach_start = b->time;
  if (r.breach_start && r.detection_time) r.dwell_time = *r.detection_time - *r.breach_start;

  r.chains = alerts::correlate(alerts_from_log(log, topo));
  r.critical_chains = static_cast<std::uint64_t>(std::count_if(
      r.chains.begin(), r.chains.end(), [](const auto& c) { return c.severity == sim::Severity::Critical; }));

  attack::AttackerState st;
  for (std::size_t i = 0; i < log.size(); ++i) {
    for (;;) {
      const attack::Phase before = st.phase;
      st = attack::advance_phase(std::move(st), log.first(i + 1), topo);
      if (st.phase == before) break;
      r.phases.push_back({st.phase, log[i].time});
    }
  }
  r.final_phase = st.phase;
  return r;
}

ReportFormat parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  throw UnsupportedFormat(std::string(s));
}

namespace {

json stamp(const std::optional<sim::Minutes>& t, const Date& epoch) {
  return t ? json(format_timestamp(*t, epoch)) : json(nullptr);
}

json to_json(const Report& r) {
  json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["epoch"] = format_date(r.epoch);
  j["end"] = format_timestamp(r.duration, r.epoch);
  j["events"] = r.events;
  j["data"] = {{"records_scraped", r.records_scraped},   {"bytes_scraped", r.bytes_scraped},
               {"records_staged", r.records_staged},     {"bytes_staged", r.bytes_staged},
               {"records_exfiltrated", r.records_exfiltrated}, {"bytes_exfiltrated", r.bytes_exfiltrated},
               {"loot_pans", r.loot_pans}};
  j["timing"] = {{"breach_start", stamp(r.breach_start, r.epoch)},
                 {"first_alert", stamp(r.first_alert_time, r.epoch)},
                 {"detection", stamp(r.detection_time, r.epoch)},
                 {"dwell_minutes", r.dwell_time ? json(*r.dwell_time) : json(nullptr)}};
  json chains = json::array();
  for (const auto& c : r.chains) {
    chains.push_back({{"alerts", c.alert_ids}, {"severity", sim::to_string(c.severity)}});
  }
  j["alerts"] = {{"total", r.alerts_total},
                 {"by_severity", r.alerts_by_severity},
                 {"by_detector", r.alerts_by_detector},
                 {"escalations", r.escalations},
                 {"reminders", r.reminders},
                 {"chains", r.chains.size()},
                 {"critical_chains", r.critical_chains},
                 {"chain_list", chains}};
  j["flows"] = {{"attempted", r.flows_attempted},
                {"delivered", r.flows_delivered},
                {"denied", r.flows_denied},
                {"monitor_records", r.monitor_records},
                {"agent_flows", r.agent_flows},
                {"agent_flows_outside_hours", r.agent_flows_outside_hours}};
  j["exec_verdicts"] = r.exec_verdicts;
  j["soc_actions"] = r.soc_actions;
  json ms = json::array();
  for (const auto& m : r.milestones) ms.push_back({{"name", m.name}, {"time", format_timestamp(m.time, r.epoch)}});
  j["milestones"] = ms;
  json ph = json::array();
  for (const auto& p : r.phases) {
    ph.push_back({{"phase", attack::to_string(p.phase)}, {"time", format_timestamp(p.time, r.epoch)}});
  }
  j["phases"] = ph;
  j["final_phase"] = attack::to_string(r.final_phase);
  return j;
}

std::string span_text(sim::Minutes m) {
  std::ostringstream o;
  o << m / sim::kMinutesPerDay << "d " << (m % sim::kMinutesPerDay) / 60 << "h " << m % 60 << "m";
  return o.str();
}

std::string to_text(const Report& r) {
  std::ostringstream o;
  auto ts = [&](const std::optional<sim::Minutes>& t) { return t ? format_timestamp(*t, r.epoch) : std::string("-"); };
  o << "scenario " << r.scenario << " (seed " << r.seed << ")\n";
  o << "  window        " << format_date(r.epoch) << " .. " << format_timestamp(r.duration, r.epoch) << ", "
    << r.events << " events\n\n";
  o << "data\n";
  o << "  scraped       " << r.records_scraped << " records, " << r.bytes_scraped << " bytes\n";
  o << "  on repos      " << r.records_staged << " records, " << r.bytes_staged << " bytes\n";
  o << "  exfiltrated   " << r.records_exfiltrated << " records, " << r.bytes_exfiltrated << " bytes\n";
  o << "  pans in loot  " << r.loot_pans << "\n\n";
  o << "detection\n";
  o << "  breach start  " << ts(r.breach_start) << "\n";
  o << "  first alert   " << ts(r.first_alert_time) << "\n";
  o << "  detection     " << ts(r.detection_time) << "\n";
  o << "  dwell time    " << (r.dwell_time ? span_text(*r.dwell_time) : std::string("-")) << "\n\n";
  o << "alerts          " << r.alerts_total << " (" << r.escalations << " escalations, " << r.reminders
    << " reminders)\n";
  for (const auto& [k, v] : r.alerts_by_severity) o << "  " << k << " " << v << "\n";
  for (const auto& [k, v] : r.alerts_by_detector) o << "  [" << k << "] " << v << "\n";
  o << "  plot chains   " << r.chains.size() << " (" << r.critical_chains << " critical)\n\n";
  o << "flows           " << r.flows_attempted << " attempted, " << r.flows_delivered << " delivered, "
    << r.flows_denied << " denied, " << r.monitor_records << " monitored\n";
  o << "  agent flows   " << r.agent_flows << " (" << r.agent_flows_outside_hours << " outside office hours)\n";
  o << "exec verdicts  ";
  for (const auto& [k, v] : r.exec_verdicts) o << " " << k << "=" << v;
  o << "\nsoc actions     " << r.soc_actions << "\n\n";
  o << "milestones\n";
  if (r.milestones.empty()) o << "  (none)\n";
  for (const auto& m : r.milestones) o << "  " << format_timestamp(m.time, r.epoch) << "  " << m.name << "\n";
  o << "phases\n";
  for (const auto& p : r.phases) o << "  " << format_timestamp(p.time, r.epoch) << "  " << attack::to_string(p.phase) << "\n";
  o << "  final         " << attack::to_string(r.final_phase) << "\n";
  return o.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat f) {
  return f == ReportFormat::Json ? to_json(r).dump(2) + "\n" : to_text(r);
}

std::string emit_report(const Report& r, std::string_view format) { return emit_report(r, parse_format(format)); }

std::string diff_reports(const Report& a, const Report& b) {
  json ja = to_json(a);
  json jb = to_json(b);
  ja.erase("alerts");  // chain lists are compared by count below
  jb.erase("alerts");
  ja["alerts"] = {{"total", a.alerts_total}, {"chains", a.chains.size()}, {"critical_chains", a.critical_chains}};
  jb["alerts"] = {{"total", b.alerts_total}, {"chains", b.chains.size()}, {"critical_chains", b.critical_chains}};
  for (const auto& [k, v] : a.alerts_by_detector) ja["alerts"]["detector_" + k] = v;
  for (const auto& [k, v] : b.alerts_by_detector) jb["alerts"]["detector_" + k] = v;
  ja.erase("milestones");
  jb.erase("milestones");
  ja.erase("phases");
  jb.erase("phases");
  for (const auto& m : a.milestones) ja["milestones"][m.name] = format_timestamp(m.time, a.epoch);
  for (const auto& m : b.milestones) jb["milestones"][m.name] = format_timestamp(m.time, b.epoch);

  const json fa = ja.flatten();
  const json fb = jb.flatten();
  std::set<std::string> keys;
  for (const auto& [k, v] : fa.items()) keys.insert(k);
  for (const auto& [k, v] : fb.items()) keys.insert(k);
  std::ostringstream o;
  for (const auto& k : keys) {
    const json va = fa.contains(k) ? fa[k] : json(nullptr);
    const json vb = fb.contains(k) ? fb[k] : json(nullptr);
    if (va != vb) o << k << ": " << va.dump() << " -> " << vb.dump() << "\n";
  }
  return o.str();
}

}  // namespace breachsim::scenario
