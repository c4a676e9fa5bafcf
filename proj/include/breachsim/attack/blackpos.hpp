#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "breachsim/attack/staging_cipher.hpp"
#include "breachsim/attack/track_scanner.hpp"
#include "breachsim/sim/rng.hpp"
#include "breachsim/sim/world.hpp"

namespace breachsim::attack {

enum class CaptureMode {
  Tracks,      ///< stage framed track hits only
  MemoryDump,  ///< stage the whole target memory (used against token stores)
};

std::string_view to_string(CaptureMode m);
std::optional<CaptureMode> parse_capture_mode(std::string_view s);

/// Hardcoded configuration of the memory scraper and its exfiltration helper.
struct BlackPosAgent {
  std::string service_name = "POSWDS";
  std::vector<std::string> target_processes{"pos.exe"};
  std::size_t chunk_size = 10'000'000;
  std::string staging_path = "C:\\WINDOWS\\system 32\\winxml.dll";
  AgentKey key{};
  sim::Minutes office_start = 10 * sim::kMinutesPerHour;  ///< minute of day, inclusive
  sim::Minutes office_end = 18 * sim::kMinutesPerHour;    ///< minute of day, exclusive
  std::vector<sim::HostId> repo_hosts;
  std::vector<sim::HostId> drop_hosts;
  bool obfuscated = true;
  bool encrypted = true;
  std::set<sim::HostRole> target_roles{sim::HostRole::PosTerminal};
  CaptureMode capture = CaptureMode::Tracks;

  std::string upload_channel = "file-share";
  std::string repo_credential = "Best1_user";
  std::string repo_password = "BackupU$r";
  std::string repo_path = "C:\\ftproot\\data.bin";
  std::string exfil_process = "ftpdump.exe";
  std::string exfil_channel = "ftp";
  std::string drop_credential = "drop-ftp";
};

class AgentConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks the agent invariants against a topology; throws AgentConfigError.
void validate_agent(const BlackPosAgent& a, const sim::Topology& topo);

bool in_office_hours(const BlackPosAgent& a, sim::Minutes now);

struct StolenRecord {
  std::string pan;
  std::string track2;
  sim::HostId source_host;
  sim::Minutes scrape_time = 0;
  std::size_t offset = 0;
};

class NonTargetProcess : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScanResult {
  std::vector<StolenRecord> records;
  std::uint64_t chunks = 0;
  std::uint64_t bytes_scanned = 0;
};

/// Reads process memory chunk by chunk (with overlap) and extracts tracks.
ScanResult scan_memory_chunks(const BlackPosAgent& a, const sim::Process& p, sim::Minutes now);

/// Ciphertext (or plaintext, with encryption off) waiting on the POS host.
struct StagingArea {
  sim::BlobList blobs;
  std::uint64_t next_offset = 0;  ///< keystream position of the next staged byte
  std::uint64_t records = 0;

  std::uint64_t bytes() const;
  bool empty() const { return blobs.empty(); }
};

/// One installed scraper.
struct AgentInstance {
  sim::HostId host;
  sim::ProcessId pid{};
  bool collecting = false;
  bool removed = false;
  StagingArea staging;
  std::optional<std::uint64_t> last_memory_version;
  std::set<std::pair<std::size_t, std::string>> last_hits;
};

/// Framed tracks concatenated, as written to the staging file before encryption.
sim::Bytes frame_records(const std::vector<StolenRecord>& rs);

/// Appends records to the staging file; nullopt (no write) for an empty list.
/// Returns the seq of the file-write event.
std::optional<std::uint64_t> stage_records(const BlackPosAgent& a, AgentInstance& inst,
                                           const std::vector<StolenRecord>& rs, sim::World& world);
/// Memory-dump capture: stage raw bytes.
std::optional<std::uint64_t> stage_bytes(const BlackPosAgent& a, AgentInstance& inst, const sim::Bytes& raw,
                                         sim::World& world);

struct CollectResult {
  bool scanned = false;
  std::uint64_t new_records = 0;
  std::optional<std::uint64_t> write_seq;
};

/// One scraper pass on the agent's host: scans the first target process whose
/// memory changed since the last pass, logs a memory-scan, stages new hits.
CollectResult collect(const BlackPosAgent& a, AgentInstance& inst, sim::World& world);

/// Plaintext of everything currently staged.
sim::Bytes decrypt_staging(const BlackPosAgent& a, const StagingArea& s);

struct Deferred {
  std::string reason;
};
using UploadOutcome = std::variant<sim::FlowResult, Deferred>;

/// Blobs aggregated on each internal repository.
using RepoStores = std::map<sim::HostId, sim::BlobList>;

/// Repo with the smallest site distance to `host`; ties go to the first listed.
sim::HostId nearest_repo(const BlackPosAgent& a, const sim::Topology& topo, const sim::HostId& host);

/// Office hours + non-empty staging: one flow to the nearest repo. Staging is
/// cleared only if the flow is delivered.
UploadOutcome upload_staged(const BlackPosAgent& a, AgentInstance& inst, sim::World& world, RepoStores& repos);

/// Pushes a repo's blobs to the drops, partitioned round robin, one flow per
/// drop that has a share. Denied shares stay on the repo.
std::vector<sim::FlowResult> relay_exfil(const BlackPosAgent& a, const sim::HostId& repo, sim::World& world,
                                         RepoStores& repos, std::optional<sim::ProcessId> exfil_pid);

enum class DestructVerdict { Keep, Remove };

/// Removes the agent (process, binary, staging file) when the host falls
/// outside the target predicate.
DestructVerdict self_destruct_check(const BlackPosAgent& a, AgentInstance& inst, sim::World& world);

/// Indicator strings a signature scanner keys on.
std::vector<std::string> agent_indicators(const BlackPosAgent& a);
std::vector<std::string> exfil_indicators(const BlackPosAgent& a);

/// Synthetic binaries. Indicator strings are XOR-masked when obfuscated.
sim::Bytes build_agent_image(const BlackPosAgent& a, sim::Rng& rng);
sim::Bytes build_exfil_image(const BlackPosAgent& a, int version, sim::Rng& rng);

}  // namespace breachsim::attack
