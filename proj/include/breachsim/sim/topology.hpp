#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "breachsim/integrity/types.hpp"
#include "breachsim/sim/vocab.hpp"

namespace breachsim::sim {

class UnknownHost : public std::runtime_error {
 public:
  explicit UnknownHost(const HostId& id) : std::runtime_error("unknown host: " + id.str()) {}
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Process {
  ProcessId id{};
  std::string name;
  HostId owner;
  Bytes memory;
  std::uint64_t memory_version = 0;  ///< bumped whenever memory contents change
  std::string digest;
  std::optional<std::string> service;
};

enum class SignatureState { Unsigned, Signed };

struct InstalledBinary {
  std::string label;
  std::string digest;
  SignatureState state = SignatureState::Unsigned;
  std::shared_ptr<const Bytes> image;
};

struct Host {
  HostId id;
  std::string segment;
  HostRole role = HostRole::BusinessServer;
  int site = 0;  ///< coarse location; "nearest" means smallest site distance
  std::vector<InstalledBinary> binaries;
  std::map<ProcessId, Process> processes;
  std::vector<integrity::Certificate> root_certs;
  std::set<std::string> credentials;
  bool integrity_enforced = false;
  std::map<std::string, Bytes> files;
};

/// Merchant network layout: segments, hosts, and which segment pairs can route.
class Topology {
 public:
  void add_segment(std::string name);
  void connect(const std::string& a, const std::string& b);
  Host& add_host(Host host);
  void add_domain_credential(std::string credential);

  bool has_segment(const std::string& name) const { return segments_.contains(name); }
  bool adjacent(const std::string& a, const std::string& b) const;

  bool contains(const HostId& id) const { return hosts_.contains(id); }
  const Host& host(const HostId& id) const;
  Host& host(const HostId& id);
  const Host* find(const HostId& id) const;
  Host* find(const HostId& id);

  /// Valid on dst if the host lists it, or it is a domain-wide account and dst is internal.
  bool credential_valid_for(const std::string& credential, const Host& dst) const;

  const std::set<std::string>& segments() const { return segments_; }
  const std::set<std::pair<std::string, std::string>>& adjacency() const { return adjacency_; }
  const std::map<HostId, Host>& hosts() const { return hosts_; }
  std::map<HostId, Host>& hosts() { return hosts_; }

  std::vector<HostId> hosts_with_role(HostRole role) const;

 private:
  std::set<std::string> segments_;
  std::set<std::pair<std::string, std::string>> adjacency_;
  std::map<HostId, Host> hosts_;
  std::set<std::string> domain_credentials_;
};

}  // namespace breachsim::sim
