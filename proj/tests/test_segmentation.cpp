#include "breachsim/attack/phases.hpp"
#include "breachsim/segmentation/behavior.hpp"
#include "breachsim/segmentation/policy.hpp"
#include "doctest.h"

using namespace breachsim;
using namespace breachsim::segmentation;
using sim::HostId;

namespace {

const std::vector<std::string> kSegments{"vendor", "business", "pos", "security", "external"};

sim::Topology merchant() {
  sim::Topology t;
  for (const auto& s : kSegments) t.add_segment(s);
  t.connect("vendor", "business");
  t.connect("business", "pos");
  t.connect("security", "pos");
  t.connect("business", "external");
  t.add_domain_credential("domain-admin");
  auto add = [&](const char* id, const char* seg, sim::HostRole role, std::set<std::string> creds) {
    sim::Host h;
    h.id = HostId(id);
    h.segment = seg;
    h.role = role;
    h.credentials = std::move(creds);
    t.add_host(h);
  };
  add("hvac", "vendor", sim::HostRole::Vendor, {});
  add("billing", "business", sim::HostRole::BusinessServer, {"fazio-hvac"});
  add("ftp", "business", sim::HostRole::FileServer, {});
  add("till", "pos", sim::HostRole::PosTerminal, {"pos-svc"});
  add("ic", "security", sim::HostRole::IntegrityCenter, {"integrity-svc"});
  add("drop", "external", sim::HostRole::ExternalDrop, {"drop-ftp"});
  return t;
}

SegmentationPolicy flat() {
  SegmentationPolicy p;
  p.vlan_allow = {{"vendor", "business"}, {"pos", "business"}, {"business", "external"}};
  return p;
}

SegmentationPolicy zero_trust() {
  SegmentationPolicy p;
  p.kind = PolicyKind::ZeroTrust;
  p.matrix = {{"fazio-hvac", "vendor", "business", "billing"},
              {"pos-svc", "pos", "business", "settlement"},
              {"integrity-svc", "security", "pos", "update"}};
  return p;
}

sim::Flow flow(const char* src, const char* dst, const char* channel, std::optional<std::string> cred = {}) {
  sim::Flow f;
  f.src = HostId(src);
  f.dst = HostId(dst);
  f.channel = channel;
  f.bytes = 100;
  f.credential = std::move(cred);
  return f;
}

struct Net {
  sim::Engine eng{1};
  sim::World world{eng, merchant()};
  PolicyGate gate;
  explicit Net(SegmentationPolicy p, std::optional<BehaviorProfile> bp = {}) : gate(std::move(p), std::move(bp)) {
    world.set_gate(&gate);
  }
};

// Reference decision written from the rules, not from evaluate_flow.
bool reference_allow(const SegmentationPolicy& p, const sim::Topology& t, const sim::Flow& f) {
  const auto& s = t.host(f.src).segment;
  const auto& d = t.host(f.dst).segment;
  if (!t.adjacent(s, d)) return false;
  if (p.kind == PolicyKind::ZeroTrust) {
    for (const auto& e : p.matrix) {
      if (f.credential && e.credential == *f.credential && e.src_segment == s && e.dst_segment == d &&
          e.channel == f.channel) {
        return true;
      }
    }
    return false;
  }
  if (s == d || p.vlan_allow.contains({s, d})) return true;
  return p.credential_bypass && f.credential && t.credential_valid_for(*f.credential, t.host(f.dst));
}

// The kill chain's entry: vendor credential, then a hop into the terminal.
attack::Phase intrusion(Net& n) {
  n.eng.emit(sim::CredentialTheft{HostId("hvac"), "fazio-hvac"});
  n.eng.emit(sim::CredentialTheft{HostId("billing"), "domain-admin"});
  n.world.send_flow(flow("hvac", "billing", "rdp", "fazio-hvac"));
  n.world.send_flow(flow("billing", "till", "smb", "domain-admin"));
  n.world.send_flow(flow("billing", "till", "smb", "pos-svc"));
  attack::AttackerState st;
  st = attack::advance_phase(st, n.eng.log(), n.world.topology());
  return st.phase;
}

}  // namespace

TEST_CASE("flat VLAN rules") {
  Net n(flat());
  CHECK(n.world.send_flow(flow("hvac", "billing", "billing")).delivered());   // allowlisted
  CHECK(n.world.send_flow(flow("billing", "ftp", "smb")).delivered());       // same segment
  CHECK_FALSE(n.world.send_flow(flow("billing", "till", "smb")).delivered()); // not allowlisted
  CHECK(n.world.send_flow(flow("billing", "till", "smb", "pos-svc")).delivered());  // bypass
  CHECK_FALSE(n.world.send_flow(flow("hvac", "till", "smb", "pos-svc")).delivered());  // no route
  CHECK(n.eng.log().back().as<sim::FlowRecord>()->reason == "no-route");

  SegmentationPolicy strict = flat();
  strict.credential_bypass = false;
  Net m(strict);
  CHECK_FALSE(m.world.send_flow(flow("billing", "till", "smb", "pos-svc")).delivered());
}

TEST_CASE("zero trust allows only exact matrix entries") {
  Net n(zero_trust());
  CHECK(n.world.send_flow(flow("hvac", "billing", "billing", "fazio-hvac")).delivered());
  CHECK_FALSE(n.world.send_flow(flow("hvac", "billing", "rdp", "fazio-hvac")).delivered());
  CHECK_FALSE(n.world.send_flow(flow("hvac", "billing", "billing")).delivered());
  CHECK_FALSE(n.world.send_flow(flow("billing", "ftp", "smb")).delivered());  // same segment is not implicit
  CHECK_FALSE(n.world.send_flow(flow("billing", "till", "smb", "domain-admin")).delivered());
  CHECK(n.eng.log().back().as<sim::FlowRecord>()->reason == "default-deny");
}

TEST_CASE("policy decisions match the reference on random flows") {
  sim::Rng rng(31);
  const sim::Topology t = merchant();
  std::vector<HostId> hosts;
  for (const auto& [id, h] : t.hosts()) hosts.push_back(id);
  const std::vector<std::string> channels{"billing", "settlement", "update", "smb", "ftp", "rdp"};
  const std::vector<std::string> creds{"", "fazio-hvac", "pos-svc", "integrity-svc", "domain-admin", "drop-ftp"};

  for (int round = 0; round < 40; ++round) {
    SegmentationPolicy p = rng.below(2) ? flat() : zero_trust();
    p.credential_bypass = rng.below(2);
    for (int k = 0; k < 3; ++k) {
      p.vlan_allow.emplace(kSegments[rng.below(kSegments.size())], kSegments[rng.below(kSegments.size())]);
    }
    for (int i = 0; i < 250; ++i) {
      const HostId& a = hosts[rng.below(hosts.size())];
      const HostId& b = hosts[rng.below(hosts.size())];
      if (a == b) continue;
      sim::Flow f;
      f.src = a;
      f.dst = b;
      f.channel = channels[rng.below(channels.size())];
      f.bytes = 1;
      const std::string& c = creds[rng.below(creds.size())];
      if (!c.empty()) f.credential = c;
      const sim::Host& src = t.host(a);
      const sim::Host& dst = t.host(b);
      const sim::FlowContext ctx{f, src, dst, t.adjacent(src.segment, dst.segment),
                                 f.credential && t.credential_valid_for(*f.credential, dst)};
      REQUIRE(evaluate_flow(p, ctx).allow == reference_allow(p, t, f));
    }
  }
}

TEST_CASE("monitoring covers every attempted flow when enabled") {
  for (bool on : {false, true}) {
    SegmentationPolicy p = flat();
    p.monitor_all = on;
    Net n(p);
    n.world.send_flow(flow("hvac", "billing", "billing"));
    n.world.send_flow(flow("hvac", "till", "rdp"));
    n.world.send_flow(flow("billing", "till", "smb"));
    std::size_t monitored = 0;
    for (const auto& e : n.eng.log()) monitored += e.as<sim::FlowRecord>()->monitored;
    CHECK(monitored == (on ? 3u : 0u));
  }
  CHECK(zero_trust().monitors_everything());
}

TEST_CASE("behavior profiling flags novel destinations after warmup") {
  BehaviorProfile bp;
  bp.warmup = 3;
  const auto usual = flow("hvac", "billing", "billing", "fazio-hvac");
  for (int i = 0; i < 3; ++i) CHECK(check_behavior(bp, usual) == BehaviorVerdict::Normal);
  CHECK(check_behavior(bp, usual) == BehaviorVerdict::Normal);
  CHECK(check_behavior(bp, flow("hvac", "billing", "rdp", "fazio-hvac")) == BehaviorVerdict::Anomalous);
  CHECK(check_behavior(bp, flow("hvac", "billing", "rdp", "fazio-hvac")) == BehaviorVerdict::Normal);  // learned
  CHECK(check_behavior(bp, flow("hvac", "till", "smb")) == BehaviorVerdict::Normal);  // no credential

  // anything novel during warmup is learned silently
  BehaviorProfile young;
  young.warmup = 2;
  CHECK(check_behavior(young, flow("a", "x", "c", "k")) == BehaviorVerdict::Normal);
  CHECK(check_behavior(young, flow("a", "y", "c", "k")) == BehaviorVerdict::Normal);
  CHECK(check_behavior(young, flow("a", "z", "c", "k")) == BehaviorVerdict::Anomalous);

  BehaviorProfile gate_bp;
  gate_bp.warmup = 0;
  Net n(flat(), gate_bp);
  n.world.send_flow(flow("hvac", "billing", "billing", "fazio-hvac"));
  CHECK(n.eng.log().back().as<sim::FlowRecord>()->anomalous);
}

TEST_CASE("policy kinds parse") {
  CHECK(parse_policy_kind("flat-vlan") == PolicyKind::FlatVlan);
  CHECK(parse_policy_kind("zero-trust") == PolicyKind::ZeroTrust);
  CHECK_FALSE(parse_policy_kind("vlan").has_value());
  CHECK(to_string(PolicyKind::ZeroTrust) == "zero-trust");
}

TEST_CASE("the intrusion reaches the terminals on a flat network only") {
  Net open(flat());
  CHECK(intrusion(open) == attack::Phase::PosInfection);
  Net closed(zero_trust());
  CHECK(intrusion(closed) == attack::Phase::InitialInfection);
}
