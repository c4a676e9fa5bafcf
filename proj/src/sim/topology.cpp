#include "breachsim/sim/topology.hpp"

namespace breachsim::sim {

void Topology::add_segment(std::string name) {
  if (name.empty()) throw TopologyError("segment name must be non-empty");
  if (!segments_.insert(std::move(name)).second) throw TopologyError("duplicate segment");
}

void Topology::connect(const std::string& a, const std::string& b) {
  if (!has_segment(a) || !has_segment(b)) throw TopologyError("adjacency references unknown segment");
  adjacency_.emplace(a, b);
  adjacency_.emplace(b, a);
}

bool Topology::adjacent(const std::string& a, const std::string& b) const {
  return a == b || adjacency_.contains({a, b});
}

Host& Topology::add_host(Host host) {
  if (host.id.empty()) throw TopologyError("host id must be non-empty");
  if (!has_segment(host.segment)) {
    throw TopologyError("host " + host.id.str() + " is in unknown segment " + host.segment);
  }
  if (host.role == HostRole::ExternalDrop && host.segment != kExternalSegment) {
    throw TopologyError("external-drop host " + host.id.str() + " must be in the external segment");
  }
  auto [it, inserted] = hosts_.emplace(host.id, std::move(host));
  if (!inserted) throw TopologyError("duplicate host " + it->first.str());
  return it->second;
}

void Topology::add_domain_credential(std::string credential) { domain_credentials_.insert(std::move(credential)); }

const Host& Topology::host(const HostId& id) const {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) throw UnknownHost(id);
  return it->second;
}

Host& Topology::host(const HostId& id) {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) throw UnknownHost(id);
  return it->second;
}

const Host* Topology::find(const HostId& id) const {
  auto it = hosts_.find(id);
  return it == hosts_.end() ? nullptr : &it->second;
}

Host* Topology::find(const HostId& id) {
  auto it = hosts_.find(id);
  return it == hosts_.end() ? nullptr : &it->second;
}

bool Topology::credential_valid_for(const std::string& credential, const Host& dst) const {
  if (dst.credentials.contains(credential)) return true;
  return dst.segment != kExternalSegment && dst.role != HostRole::Vendor &&
         domain_credentials_.contains(credential);
}

std::vector<HostId> Topology::hosts_with_role(HostRole role) const {
  std::vector<HostId> out;
  for (const auto& [id, h] : hosts_) {
    if (h.role == role) out.push_back(id);
  }
  return out;
}

}  // namespace breachsim::sim
