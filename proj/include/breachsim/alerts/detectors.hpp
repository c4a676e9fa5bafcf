#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "breachsim/alerts/alert.hpp"
#include "breachsim/sim/event.hpp"
#include "breachsim/sim/topology.hpp"

namespace breachsim::alerts {

struct DetectorConfig {
  bool signature = true;
  bool behavior = true;
  bool dlp = true;
  bool flow_anomaly = true;
  std::vector<std::string> indicators{"POSWDS", "winxml.dll", "Best1_user", "BackupU$r"};
  std::uint64_t scraper_scans = 24;  ///< memory scans by a service process before it is flagged
  std::vector<std::string> system_dirs{"c:\\windows\\"};
  std::set<std::string> pos_channels{"settlement"};  ///< channels POS terminals normally use
};

/// Stateful detector set fed with consecutive log deltas.
///
///  signature     executed image containing an indicator string ("malware-object", major)
///  behavior      service process repeatedly scanning POS memory (major);
///                executable-looking file dropped in a system directory on a POS host (minor);
///                POS host moving data over a channel it does not normally use (minor)
///  dlp           plaintext card data delivered into the external segment (major)
///  flow-anomaly  flow the segmentation profiler marked anomalous (major)
class DetectorSuite {
 public:
  DetectorSuite(DetectorConfig cfg, const sim::Topology& topo);

  /// Alerts for `delta`, stamped `now`, with ids continuing from the last call.
  std::vector<Alert> run(std::span<const sim::Event> delta, sim::Minutes now);

  const DetectorConfig& config() const noexcept { return cfg_; }

 private:
  Alert make(sim::Minutes now, std::string detector, std::string type, Severity sev, std::string classtype,
             const sim::HostId& host, std::string msg, std::string display);
  bool has_indicator(const sim::Bytes& image) const;

  DetectorConfig cfg_;
  const sim::Topology& topo_;
  std::uint64_t next_id_ = 1;

  struct ServiceProc {
    sim::Event start;
    std::vector<sim::Event> scans;
    bool flagged = false;
  };
  std::map<std::pair<sim::HostId, std::uint32_t>, ServiceProc> services_;
  std::set<std::pair<sim::HostId, std::string>> dropped_files_;
  std::set<sim::HostId> egress_hosts_;
  std::set<std::pair<sim::HostId, sim::HostId>> leak_pairs_;
};

}  // namespace breachsim::alerts
