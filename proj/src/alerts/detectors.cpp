#include "breachsim/alerts/detectors.hpp"

#include <algorithm>
#include <cctype>

#include "breachsim/alerts/artifacts.hpp"

namespace breachsim::alerts {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool binary_extension(const std::string& path) {
  const std::string p = lower(path);
  return p.ends_with(".dll") || p.ends_with(".exe") || p.ends_with(".sys");
}

}  // namespace

DetectorSuite::DetectorSuite(DetectorConfig cfg, const sim::Topology& topo) : cfg_(std::move(cfg)), topo_(topo) {
  for (auto& d : cfg_.system_dirs) d = lower(d);
}

Alert DetectorSuite::make(sim::Minutes now, std::string detector, std::string type, Severity sev,
                          std::string classtype, const sim::HostId& host, std::string msg, std::string display) {
  Alert a;
  a.id = next_id_++;
  a.timestamp = now;
  a.detector = std::move(detector);
  a.alert_type = std::move(type);
  a.severity = sev;
  a.classtype = std::move(classtype);
  a.subject_host = host;
  a.msg = std::move(msg);
  a.display_msg = std::move(display);
  a.last_notified = now;
  return a;
}

bool DetectorSuite::has_indicator(const sim::Bytes& image) const {
  for (const auto& ind : cfg_.indicators) {
    if (ind.empty()) continue;
    if (std::search(image.begin(), image.end(), ind.begin(), ind.end()) != image.end()) return true;
  }
  return false;
}

std::vector<Alert> DetectorSuite::run(std::span<const sim::Event> delta, sim::Minutes now) {
  std::vector<Alert> out;
  auto role_of = [&](const sim::HostId& h) {
    const sim::Host* host = topo_.find(h);
    return host ? std::optional(host->role) : std::nullopt;
  };

  for (std::size_t i = 0; i < delta.size(); ++i) {
    const sim::Event& e = delta[i];

    if (const auto* x = e.as<sim::ExecRequest>(); x && cfg_.signature) {
      if (x->verdict != sim::ExecVerdict::Executed || !x->image || !has_indicator(*x->image)) continue;
      Alert a = make(now, "signature", "malware-object", Severity::Major, "malware-signature", x->host,
                     "Malware.Binary " + x->label + " on " + x->host.str(), "Malware detected: " + x->label);
      a.evidence.push_back(make_evidence(e, topo_));
      for (std::size_t j = i + 1; j < delta.size(); ++j) {
        const auto* ps = delta[j].as<sim::ProcessStart>();
        if (ps && ps->host == x->host && ps->digest == x->digest) {
          a.evidence.push_back(make_evidence(delta[j], topo_));
          break;
        }
      }
      out.push_back(std::move(a));
      continue;
    }

    if (const auto* ps = e.as<sim::ProcessStart>(); ps && ps->service && role_of(ps->host) == sim::HostRole::PosTerminal) {
      services_.emplace(std::make_pair(ps->host, sim::raw(ps->pid)), ServiceProc{e, {}, false});
      continue;
    }

    if (const auto* ms = e.as<sim::MemoryScan>(); ms && cfg_.behavior) {
      auto it = services_.find({ms->host, sim::raw(ms->scanner)});
      if (it == services_.end() || it->second.flagged) continue;
      ServiceProc& sp = it->second;
      sp.scans.push_back(e);
      if (sp.scans.size() < cfg_.scraper_scans) continue;
      sp.flagged = true;
      const auto& start = std::get<sim::ProcessStart>(sp.start.payload);
      Alert a = make(now, "behavior", "anomaly", Severity::Major, "anomaly-tag", ms->host,
                     "Service " + *start.service + " (" + start.name + ") repeatedly reading POS process memory",
                     "Memory scraping behaviour on " + ms->host.str());
      a.evidence.push_back(make_evidence(sp.start, topo_));
      for (const auto& s : sp.scans) a.evidence.push_back(make_evidence(s, topo_));
      sp.scans.clear();
      out.push_back(std::move(a));
      continue;
    }

    if (const auto* fw = e.as<sim::FileWrite>(); fw && cfg_.behavior) {
      if (!fw->writer || role_of(fw->host) != sim::HostRole::PosTerminal || !binary_extension(fw->path)) continue;
      const std::string p = lower(fw->path);
      const bool sysdir = std::any_of(cfg_.system_dirs.begin(), cfg_.system_dirs.end(),
                                      [&](const std::string& d) { return p.starts_with(d); });
      if (!sysdir || !dropped_files_.emplace(fw->host, fw->path).second) continue;
      Alert a = make(now, "behavior", "anomaly", Severity::Minor, "suspicious-file", fw->host,
                     "Process wrote data into system binary " + fw->path,
                     "Suspicious write to " + fw->path);
      a.evidence.push_back(make_evidence(e, topo_));
      out.push_back(std::move(a));
      continue;
    }

    if (const auto* fr = e.as<sim::FlowRecord>()) {
      const sim::Flow& f = fr->flow;
      const sim::Host* src = topo_.find(f.src);
      const sim::Host* dst = topo_.find(f.dst);
      if (!src || !dst) continue;
      const bool delivered = fr->outcome == sim::FlowOutcome::Delivered;

      if (cfg_.flow_anomaly && fr->anomalous) {
        Alert a = make(now, "flow-anomaly", "anomaly", Severity::Major, "anomaly-tag", f.src,
                       "Credential " + f.credential.value_or("-") + " used " + f.src.str() + " -> " + f.dst.str() +
                           " over " + f.channel + " outside its profile",
                       "Unusual access by " + f.credential.value_or("-"));
        a.evidence.push_back(make_evidence(e, topo_));
        out.push_back(std::move(a));
      }
      if (cfg_.behavior && delivered && f.payload && src->role == sim::HostRole::PosTerminal &&
          !cfg_.pos_channels.contains(f.channel) && egress_hosts_.insert(f.src).second) {
        Alert a = make(now, "behavior", "anomaly", Severity::Minor, "data-egress", f.src,
                       "POS terminal sent " + std::to_string(sim::payload_size(f)) + " bytes to " + f.dst.str() +
                           " over " + f.channel,
                       "Unexpected data transfer from " + f.src.str());
        a.evidence.push_back(make_evidence(e, topo_));
        out.push_back(std::move(a));
      }
      if (cfg_.dlp && delivered && f.classification == sim::Classification::PlaintextPan &&
          src->segment != sim::kExternalSegment && dst->segment == sim::kExternalSegment &&
          leak_pairs_.emplace(f.src, f.dst).second) {
        Alert a = make(now, "dlp", "data-leak", Severity::Major, "policy-violation", f.src,
                       "Card numbers in clear sent " + f.src.str() + " -> " + f.dst.str(),
                       "Cardholder data leaving the network");
        a.evidence.push_back(make_evidence(e, topo_));
        out.push_back(std::move(a));
      }
    }
  }
  return out;
}

}  // namespace breachsim::alerts
