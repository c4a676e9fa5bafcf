#include "breachsim/attack/blackpos.hpp"

#include <algorithm>
#include <cstdlib>

#include "breachsim/payment/luhn.hpp"

namespace breachsim::attack {

namespace {

constexpr std::string_view kFiller = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz _-.,:";

std::string basename_of(const std::string& path) {
  const auto cut = path.find_last_of("\\/");
  return cut == std::string::npos ? path : path.substr(cut + 1);
}

void append_filler(sim::Bytes& out, std::size_t n, sim::Rng& rng) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(kFiller[rng.below(kFiller.size())]));
}

void append_string(sim::Bytes& out, const std::string& s, bool mask) {
  std::uint8_t k = 0xA7;
  for (char c : s) {
    out.push_back(mask ? static_cast<std::uint8_t>(static_cast<std::uint8_t>(c) ^ k) : static_cast<std::uint8_t>(c));
    k = static_cast<std::uint8_t>(k * 5 + 0x3D);
  }
  out.push_back(0);
}

sim::Bytes build_image(const std::string& magic, const std::vector<std::string>& strings, bool mask, sim::Rng& rng) {
  sim::Bytes out{'M', 'Z'};
  append_string(out, magic, false);
  append_filler(out, 512 + rng.below(512), rng);
  for (const auto& s : strings) {
    append_string(out, s, mask);
    append_filler(out, 64 + rng.below(256), rng);
  }
  return out;
}

std::optional<std::uint64_t> stage_plain(const BlackPosAgent& a, AgentInstance& inst, sim::Bytes plain,
                                         std::uint64_t records, sim::World& world) {
  if (plain.empty()) return std::nullopt;
  sim::DataBlob blob{inst.host, inst.staging.next_offset, a.encrypted, std::move(plain)};
  if (a.encrypted) apply_keystream(a.key, blob.origin, blob.stream_offset, blob.bytes);
  inst.staging.next_offset += blob.bytes.size();
  inst.staging.records += records;
  const sim::Event& e = world.write_file(inst.host, inst.pid, a.staging_path, blob.bytes, records);
  inst.staging.blobs.push_back(std::move(blob));
  return e.seq;
}

}  // namespace

std::string_view to_string(CaptureMode m) { return m == CaptureMode::Tracks ? "tracks" : "memory-dump"; }

std::optional<CaptureMode> parse_capture_mode(std::string_view s) {
  if (s == "tracks") return CaptureMode::Tracks;
  if (s == "memory-dump") return CaptureMode::MemoryDump;
  return std::nullopt;
}

void validate_agent(const BlackPosAgent& a, const sim::Topology& topo) {
  if (a.chunk_size == 0) throw AgentConfigError("agent chunk size must be positive");
  if (a.office_start < 0 || a.office_end > sim::kMinutesPerDay || a.office_start >= a.office_end) {
    throw AgentConfigError("agent office-hours window must be non-empty within one day");
  }
  if (a.service_name.empty()) throw AgentConfigError("agent service name must be non-empty");
  for (const auto& r : a.repo_hosts) {
    const sim::Host* h = topo.find(r);
    if (!h) throw AgentConfigError("agent repo host " + r.str() + " does not exist");
    if (h->segment == sim::kExternalSegment) throw AgentConfigError("agent repo host " + r.str() + " is external");
  }
  for (const auto& d : a.drop_hosts) {
    const sim::Host* h = topo.find(d);
    if (!h) throw AgentConfigError("agent drop host " + d.str() + " does not exist");
    if (h->segment != sim::kExternalSegment) throw AgentConfigError("agent drop host " + d.str() + " is internal");
  }
}

bool in_office_hours(const BlackPosAgent& a, sim::Minutes now) {
  const sim::Minutes m = ((now % sim::kMinutesPerDay) + sim::kMinutesPerDay) % sim::kMinutesPerDay;
  return m >= a.office_start && m < a.office_end;
}

ScanResult scan_memory_chunks(const BlackPosAgent& a, const sim::Process& p, sim::Minutes now) {
  if (std::find(a.target_processes.begin(), a.target_processes.end(), p.name) == a.target_processes.end()) {
    throw NonTargetProcess("process " + p.name + " is not a scan target");
  }
  ScanResult r;
  r.chunks = chunk_count(p.memory.size(), a.chunk_size);
  r.bytes_scanned = p.memory.size();
  for (auto& h : scan_tracks_chunked(p.memory, a.chunk_size)) {
    r.records.push_back(StolenRecord{std::move(h.pan), std::move(h.track2), p.owner, now, h.offset});
  }
  return r;
}

std::uint64_t StagingArea::bytes() const {
  std::uint64_t n = 0;
  for (const auto& b : blobs) n += b.bytes.size();
  return n;
}

sim::Bytes frame_records(const std::vector<StolenRecord>& rs) {
  sim::Bytes out;
  for (const auto& r : rs) {
    out.push_back(';');
    out.insert(out.end(), r.track2.begin(), r.track2.end());
    out.push_back('?');
  }
  return out;
}

std::optional<std::uint64_t> stage_records(const BlackPosAgent& a, AgentInstance& inst,
                                           const std::vector<StolenRecord>& rs, sim::World& world) {
  if (rs.empty()) return std::nullopt;
  return stage_plain(a, inst, frame_records(rs), rs.size(), world);
}

std::optional<std::uint64_t> stage_bytes(const BlackPosAgent& a, AgentInstance& inst, const sim::Bytes& raw,
                                         sim::World& world) {
  return stage_plain(a, inst, raw, 0, world);
}

CollectResult collect(const BlackPosAgent& a, AgentInstance& inst, sim::World& world) {
  CollectResult out;
  if (inst.removed || !inst.collecting) return out;
  sim::Host& h = world.topology().host(inst.host);
  const sim::Process* target = nullptr;
  for (const auto& [pid, p] : h.processes) {
    if (std::find(a.target_processes.begin(), a.target_processes.end(), p.name) != a.target_processes.end()) {
      target = &p;
      break;
    }
  }
  if (!target || inst.last_memory_version == target->memory_version) return out;
  inst.last_memory_version = target->memory_version;

  const sim::Minutes now = world.engine().now();
  ScanResult scan = scan_memory_chunks(a, *target, now);
  std::vector<StolenRecord> fresh;
  std::set<std::pair<std::size_t, std::string>> hits;
  for (auto& r : scan.records) {
    auto key = std::make_pair(r.offset, r.track2);
    if (!inst.last_hits.contains(key)) fresh.push_back(r);
    hits.insert(std::move(key));
  }
  inst.last_hits = std::move(hits);

  sim::Bytes captured = a.capture == CaptureMode::Tracks ? frame_records(fresh) : target->memory;
  const std::uint64_t records = a.capture == CaptureMode::Tracks ? fresh.size() : 0;
  world.engine().emit(sim::MemoryScan{inst.host, inst.pid, target->id, scan.bytes_scanned, scan.chunks, records,
                                      captured.size()});
  out.scanned = true;
  out.new_records = records;
  out.write_seq = stage_plain(a, inst, std::move(captured), records, world);
  return out;
}

sim::Bytes decrypt_staging(const BlackPosAgent& a, const StagingArea& s) {
  sim::Bytes out;
  for (const auto& blob : s.blobs) {
    const sim::Bytes plain = decrypt_blob(a.key, blob);
    out.insert(out.end(), plain.begin(), plain.end());
  }
  return out;
}

sim::HostId nearest_repo(const BlackPosAgent& a, const sim::Topology& topo, const sim::HostId& host) {
  if (a.repo_hosts.empty()) throw AgentConfigError("agent has no repo hosts");
  const int site = topo.host(host).site;
  const sim::HostId* best = nullptr;
  int best_dist = 0;
  for (const auto& r : a.repo_hosts) {
    const int d = std::abs(topo.host(r).site - site);
    if (!best || d < best_dist) {
      best = &r;
      best_dist = d;
    }
  }
  return *best;
}

UploadOutcome upload_staged(const BlackPosAgent& a, AgentInstance& inst, sim::World& world, RepoStores& repos) {
  if (inst.removed) return Deferred{"agent removed"};
  if (!in_office_hours(a, world.engine().now())) return Deferred{"outside office hours"};
  if (inst.staging.empty()) return Deferred{"nothing staged"};

  const sim::HostId repo = nearest_repo(a, world.topology(), inst.host);
  sim::Flow f;
  f.src = inst.host;
  f.dst = repo;
  f.channel = a.upload_channel;
  f.credential = a.repo_credential;
  f.payload = std::make_shared<const sim::BlobList>(inst.staging.blobs);
  f.source_file = a.staging_path;
  f.dest_file = a.repo_path;
  f.origin_process = inst.pid;
  sim::FlowResult r = world.send_flow(std::move(f));
  if (!r.delivered()) return r;

  sim::Bytes landed;
  auto& store = repos[repo];
  for (auto& blob : inst.staging.blobs) {
    landed.insert(landed.end(), blob.bytes.begin(), blob.bytes.end());
    store.push_back(std::move(blob));
  }
  world.write_file(repo, std::nullopt, a.repo_path, landed, inst.staging.records);
  inst.staging.blobs.clear();
  inst.staging.records = 0;
  world.delete_file(inst.host, a.staging_path);
  return r;
}

std::vector<sim::FlowResult> relay_exfil(const BlackPosAgent& a, const sim::HostId& repo, sim::World& world,
                                         RepoStores& repos, std::optional<sim::ProcessId> exfil_pid) {
  std::vector<sim::FlowResult> out;
  auto it = repos.find(repo);
  if (it == repos.end() || it->second.empty() || a.drop_hosts.empty()) return out;

  const std::size_t n = a.drop_hosts.size();
  std::vector<sim::BlobList> shares(n);
  for (std::size_t i = 0; i < it->second.size(); ++i) shares[i % n].push_back(std::move(it->second[i]));
  sim::BlobList retained;

  for (std::size_t d = 0; d < n; ++d) {
    if (shares[d].empty()) continue;
    sim::Flow f;
    f.src = repo;
    f.dst = a.drop_hosts[d];
    f.channel = a.exfil_channel;
    f.credential = a.drop_credential;
    f.payload = std::make_shared<const sim::BlobList>(shares[d]);
    f.source_file = a.repo_path;
    f.origin_process = exfil_pid;
    sim::FlowResult r = world.send_flow(std::move(f));
    if (!r.delivered()) {
      for (auto& b : shares[d]) retained.push_back(std::move(b));
    }
    out.push_back(r);
  }
  it->second = std::move(retained);
  return out;
}

DestructVerdict self_destruct_check(const BlackPosAgent& a, AgentInstance& inst, sim::World& world) {
  if (inst.removed) return DestructVerdict::Remove;
  sim::Host& h = world.topology().host(inst.host);
  if (a.target_roles.contains(h.role)) return DestructVerdict::Keep;

  std::string digest;
  if (const sim::Process* p = world.find_process(inst.host, inst.pid)) digest = p->digest;
  world.kill_process(inst.host, inst.pid);
  std::erase_if(h.binaries, [&](const sim::InstalledBinary& b) { return !digest.empty() && b.digest == digest; });
  world.delete_file(inst.host, a.staging_path);
  inst.removed = true;
  inst.collecting = false;
  inst.staging = {};
  world.engine().emit(sim::SelfDestruct{inst.host, inst.pid, "host role " + std::string(sim::to_string(h.role)) +
                                                                 " outside target set"});
  return DestructVerdict::Remove;
}

std::vector<std::string> agent_indicators(const BlackPosAgent& a) {
  std::vector<std::string> out{a.service_name, basename_of(a.staging_path)};
  return out;
}

std::vector<std::string> exfil_indicators(const BlackPosAgent& a) { return {a.repo_credential, a.repo_password}; }

sim::Bytes build_agent_image(const BlackPosAgent& a, sim::Rng& rng) {
  std::vector<std::string> strings = agent_indicators(a);
  strings.push_back(a.staging_path);
  for (const auto& t : a.target_processes) strings.push_back(t);
  return build_image("pos-agent", strings, a.obfuscated, rng);
}

sim::Bytes build_exfil_image(const BlackPosAgent& a, int version, sim::Rng& rng) {
  std::vector<std::string> strings = exfil_indicators(a);
  strings.push_back(a.repo_path);
  strings.push_back("build " + std::to_string(version));
  // the relay helper carries its account in the clear
  return build_image("relay", strings, false, rng);
}

}  // namespace breachsim::attack
