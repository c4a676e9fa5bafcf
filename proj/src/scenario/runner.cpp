#include "breachsim/scenario/runner.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "breachsim/alerts/correlation.hpp"
#include "breachsim/alerts/detectors.hpp"
#include "breachsim/alerts/escalation.hpp"
#include "breachsim/alerts/routing.hpp"
#include "breachsim/alerts/soc.hpp"
#include "breachsim/attack/blackpos.hpp"
#include "breachsim/integrity/integrity.hpp"
#include "breachsim/payment/card.hpp"
#include "breachsim/payment/tokenization.hpp"
#include "breachsim/segmentation/policy.hpp"
#include "breachsim/sim/engine.hpp"
#include "breachsim/sim/world.hpp"

namespace breachsim::scenario {

namespace {

constexpr std::size_t kSlot = 48;  // bytes of POS memory per transaction buffer

using sim::HostId;
using sim::Minutes;

sim::Bytes pos_app_image(const std::string& name) {
  std::string s = "MZ\x90pos-app:" + name + ":";
  while (s.size() < 512) s += "register tender settle ";
  return {s.begin(), s.end()};
}

class Run {
 public:
  Run(const ScenarioConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        agent_(cfg.agent.agent),
        engine_(seed),
        world_(engine_, build_topology(cfg)),
        center_(HostId(cfg.integrity.center), integrity::generate_identity(cfg.integrity.center, engine_.rng())),
        gate_(cfg.segmentation.policy,
              cfg.segmentation.behavior
                  ? std::optional(segmentation::BehaviorProfile{cfg.segmentation.warmup, {}})
                  : std::nullopt),
        detectors_(cfg.alerts.detectors, world_.topology()),
        soc_(cfg.soc) {}

  sim::EventLog finish(std::uint64_t seed, Report& report) {
    setup();
    schedule();
    engine_.run_until(cfg_.duration);
    report = compute_report(cfg_, seed, engine_.log());
    return engine_.log();
  }

 private:
  // ---- setup ---------------------------------------------------------------

  void setup() {
    auto& rng = engine_.rng();
    cards_.reserve(cfg_.payment.cards);
    for (std::uint32_t i = 0; i < cfg_.payment.cards; ++i) cards_.push_back(payment::generate_card(rng));

    auto& topo = world_.topology();
    pos_hosts_ = topo.hosts_with_role(sim::HostRole::PosTerminal);

    const sim::Bytes image = pos_app_image(cfg_.payment.pos_process);
    center_.approve(image, "pos-app");
    std::optional<integrity::SignedBinary> signed_app;
    if (cfg_.integrity.enforce) {
      for (const auto& h : pos_hosts_) {
        sim::Host& host = topo.host(h);
        host.integrity_enforced = true;
        integrity::provision_terminal(host, center_.certificate());
      }
      signed_app = center_.submit(engine_, image, "pos-app");
    }
    const integrity::Executable exe =
        signed_app ? integrity::Executable(*signed_app) : integrity::Executable(image);

    for (const auto& h : pos_hosts_) {
      auto out = integrity::verify_and_execute(world_, h, exe, {"pos-app", cfg_.payment.pos_process, {}, {}});
      if (!out.pid) continue;
      legit_.insert({h, *out.pid});
      pos_pid_[h] = *out.pid;
      sim::Process& p = *world_.find_process(h, *out.pid);
      p.memory.assign(cfg_.payment.memory_bytes, '.');
      p.memory_version = 1;
    }

    world_.set_gate(&gate_);
    engine_.add_instant_hook([this](Minutes now, std::span<const sim::Event> delta) { on_instant(now, delta); });
  }

  // ---- recurring activity --------------------------------------------------

  void every(Minutes first, Minutes step, std::function<void()> fn) {
    if (first > cfg_.duration) return;
    engine_.schedule_at(first, [this, first, step, fn = std::move(fn)]() mutable {
      fn();
      every(first + step, step, std::move(fn));
    });
  }

  void schedule() {
    const auto& sw = cfg_.payment.swipes;
    if (sw.cards > 0 && !cards_.empty()) {
      for (Minutes t = sw.first; t <= sw.last; t += sw.every) every(t, sim::kMinutesPerDay, [this] { swipe_batch(); });
    }
    for (const auto& f : cfg_.traffic) {
      every(f.at, sim::kMinutesPerDay,
            [this, &f, src = resolve_hosts(cfg_, f.src), dst = resolve_hosts(cfg_, f.dst)] { background(f, src, dst); });
    }

    every(cfg_.agent.scan_offset, cfg_.agent.scan_every, [this] { scan_pass(); });
    every(cfg_.agent.upload_minute, sim::kMinutesPerHour, [this] { upload_pass(); });
    every(cfg_.agent.relay_minute, sim::kMinutesPerHour, [this] { relay_pass(); });
    every(cfg_.alerts.tick_every, cfg_.alerts.tick_every, [this] { escalation_tick(); });

    for (const auto& step : cfg_.plan) {
      engine_.schedule_at(step.at, [this, &step] { play(step); });
    }

    if (cfg_.response.notify_at && *cfg_.response.notify_at <= cfg_.duration) {
      engine_.schedule_at(*cfg_.response.notify_at, [this] { notify(); });
    }
  }

  void swipe_batch() {
    auto& rng = engine_.rng();
    const auto& pc = cfg_.payment;
    for (const auto& h : pos_hosts_) {
      auto it = pos_pid_.find(h);
      if (it == pos_pid_.end()) continue;
      sim::Process* p = world_.find_process(h, it->second);
      if (!p) continue;
      const std::size_t slots = p->memory.size() / kSlot;
      std::vector<std::uint32_t> used;
      for (std::uint32_t k = 0; k < pc.swipes.cards; ++k) {
        const auto idx = static_cast<std::uint32_t>(rng.below(cards_.size()));
        used.push_back(idx);
        std::string entry;
        if (pc.tokenization) {
          const payment::Token tok = ledger_.tokenize(cards_[idx], pc.merchant, rng, engine_.now());
          ledger_.redeem(tok.id, pc.merchant);
          entry = payment::token_store_entry(tok);
        } else {
          entry = payment::framed_track(cards_[idx]);
        }
        entry.resize(std::min(entry.size(), kSlot));
        const std::size_t off = (next_slot_[h]++ % slots) * kSlot;
        std::fill_n(p->memory.begin() + static_cast<std::ptrdiff_t>(off), kSlot, '.');
        std::copy(entry.begin(), entry.end(), p->memory.begin() + static_cast<std::ptrdiff_t>(off));
      }
      ++p->memory_version;
      engine_.emit(sim::CardSwipe{h, p->id, std::move(used), pc.tokenization});
    }
  }

  void background(const RecurringFlow& f, const std::vector<HostId>& srcs, const std::vector<HostId>& dsts) {
    for (const auto& src : srcs) {
      for (const auto& dst : dsts) {
        if (src == dst) continue;
        sim::Flow flow;
        flow.src = src;
        flow.dst = dst;
        flow.channel = f.channel;
        flow.bytes = f.bytes;
        flow.credential = f.credential;
        world_.send_flow(std::move(flow));
      }
    }
  }

  bool alive(attack::AgentInstance& inst) {
    if (!inst.removed && !world_.find_process(inst.host, inst.pid)) {
      inst.removed = true;
      inst.collecting = false;
    }
    return !inst.removed;
  }

  void scan_pass() {
    for (auto& [h, inst] : agents_) {
      if (alive(inst)) attack::collect(agent_, inst, world_);
    }
  }

  void upload_pass() {
    for (auto& [h, inst] : agents_) {
      if (alive(inst)) attack::upload_staged(agent_, inst, world_, repos_);
    }
  }

  void relay_pass() {
    if (!exfil_started_ || !attack::in_office_hours(agent_, engine_.now())) return;
    for (const auto& repo : agent_.repo_hosts) {
      auto it = exfil_pid_.find(repo);
      if (it == exfil_pid_.end() || !world_.find_process(repo, it->second)) continue;
      for (const auto& r : attack::relay_exfil(agent_, repo, world_, repos_, it->second)) {
        drops_hold_data_ = drops_hold_data_ || r.delivered();
      }
    }
  }

  // ---- attacker plan -------------------------------------------------------

  sim::FlowResult attacker_flow(const PlanStep& s, const HostId& dst, std::shared_ptr<const sim::BlobList> payload,
                                std::uint64_t bytes) {
    sim::Flow f;
    f.src = HostId(s.via);
    f.dst = dst;
    f.channel = s.channel;
    f.credential = s.credential;
    f.bytes = bytes;
    f.payload = std::move(payload);
    return world_.send_flow(std::move(f));
  }

  std::vector<HostId> targets(const PlanStep& s) {
    std::vector<HostId> out;
    for (const auto& t : s.targets) {
      for (auto& h : resolve_hosts(cfg_, t)) out.push_back(std::move(h));
    }
    return out;
  }

  void play(const PlanStep& s) {
    auto& rng = engine_.rng();
    if (s.action == "phish") {
      engine_.emit(sim::VendorPhish{HostId(s.host), true});
      engine_.emit(sim::CredentialTheft{HostId(s.host), s.credential});
    } else if (s.action == "break-in") {
      auto r = attacker_flow(s, HostId(s.host), nullptr, 2048);
      engine_.emit(sim::AttackerAction{"break-in", HostId(s.host), "flow:" + std::to_string(sim::raw(r.id))});
    } else if (s.action == "takeover-repos") {
      for (const auto& t : targets(s)) {
        if (!attacker_flow(s, t, nullptr, 1024).delivered()) continue;
        world_.topology().host(t).credentials.insert(s.account);
        engine_.emit(sim::AttackerAction{"create-account", t, s.account});
      }
    } else if (s.action == "deploy-agent") {
      const sim::Bytes image = attack::build_agent_image(agent_, rng);
      auto payload = std::make_shared<const sim::BlobList>(sim::BlobList{{HostId(s.via), 0, false, image}});
      for (const auto& t : targets(s)) {
        auto it = agents_.find(t);
        if (it != agents_.end() && alive(it->second)) continue;
        std::optional<sim::FlowId> via;
        if (t != HostId(s.via)) {  // a copy run on the staging host itself needs no transfer
          auto r = attacker_flow(s, t, payload, 0);
          if (!r.delivered()) continue;
          via = r.id;
        }
        auto out = integrity::verify_and_execute(
            world_, t, image, {"pos-agent", cfg_.agent.process_name, agent_.service_name, via});
        if (!out.pid) continue;
        attack::AgentInstance inst;
        inst.host = t;
        inst.pid = *out.pid;
        inst.collecting = collection_started_;
        attack::self_destruct_check(agent_, inst, world_);
        agents_.insert_or_assign(t, std::move(inst));
      }
    } else if (s.action == "start-collection") {
      collection_started_ = true;
      for (auto& [h, inst] : agents_) {
        if (alive(inst)) inst.collecting = true;
      }
      scan_pass();
    } else if (s.action == "deploy-exfil") {
      const sim::Bytes image = attack::build_exfil_image(agent_, s.version, rng);
      auto payload = std::make_shared<const sim::BlobList>(sim::BlobList{{HostId(s.via), 0, false, image}});
      for (const auto& t : targets(s)) {
        std::optional<sim::FlowId> via;
        if (t != HostId(s.via)) {
          auto r = attacker_flow(s, t, payload, 0);
          if (!r.delivered()) continue;
          via = r.id;
        }
        if (auto it = exfil_pid_.find(t); it != exfil_pid_.end()) world_.kill_process(t, it->second);
        auto out = integrity::verify_and_execute(
            world_, t, image, {"relay-v" + std::to_string(s.version), agent_.exfil_process, {}, via});
        if (out.pid) exfil_pid_[t] = *out.pid;
      }
    } else if (s.action == "start-exfil") {
      exfil_started_ = true;
      relay_pass();
    }
  }

  // ---- defenders -----------------------------------------------------------

  alerts::Alert* find_alert(std::uint64_t id) {
    auto it = std::find_if(alerts_.begin(), alerts_.end(), [&](const auto& a) { return a.id == id; });
    return it == alerts_.end() ? nullptr : &*it;
  }

  void act(std::uint64_t alert_id) {
    const alerts::Alert* a = find_alert(alert_id);
    if (!a) return;
    const HostId host = a->subject_host;
    alerts::remove_malware(world_, host, legit_, alerts_, alert_id, "alert " + std::to_string(alert_id));
  }

  void notify_raise(alerts::Alert& a, const alerts::Notification& n) {
    engine_.emit(sim::AlertNotify{a.id, n.from, n.to, n.reason, alerts::route_alert(a, cfg_.alerts.routing)});
    if (soc_.on_notification(a, n)) pending_.push_back(a.id);
  }

  void escalation_tick() {
    const Minutes now = engine_.now();
    auto notes = alerts::tick_escalation(alerts_, now, cfg_.alerts.escalation);
    for (const auto& n : notes) {
      if (alerts::Alert* a = find_alert(n.alert_id)) notify_raise(*a, n);
    }
    flush_actions();
  }

  void flush_actions() {
    auto ids = std::move(pending_);
    pending_.clear();
    for (auto id : ids) act(id);
  }

  void on_instant(Minutes now, std::span<const sim::Event> delta) {
    auto fresh = detectors_.run(delta, now);
    for (auto& a : fresh) {
      std::vector<std::uint64_t> seqs;
      for (const auto& e : a.evidence) seqs.push_back(e.seq);
      engine_.emit(sim::AlertRaised{a.id, a.detector, a.alert_type, a.severity, a.classtype, a.subject_host, a.msg,
                                    std::move(seqs), alerts::route_alert(a, cfg_.alerts.routing)});
      alerts_.push_back(a);
    }
    if (fresh.empty()) return;

    if (cfg_.alerts.correlation_raise) {
      for (const auto& chain : alerts::correlate(alerts_)) {
        if (chain.severity != sim::Severity::Critical) continue;
        for (auto id : chain.alert_ids) {
          alerts::Alert* a = find_alert(id);
          if (!a || a->handled || a->severity == sim::Severity::Critical) continue;
          alerts::Notification n{id, now, a->severity, sim::Severity::Critical, "correlation"};
          a->escalation_history.push_back({now, a->severity, sim::Severity::Critical});
          a->severity = sim::Severity::Critical;
          a->last_notified = now;
          notify_raise(*a, n);
        }
      }
    }
    for (const auto& f : fresh) {
      if (const alerts::Alert* a = find_alert(f.id); a && !a->handled && soc_.on_raised(*a)) pending_.push_back(f.id);
    }
    flush_actions();
  }

  void notify() {
    if (cfg_.response.notify_when == "drops-hold-data" && !drops_hold_data_) return;
    engine_.emit(sim::SocAction{"external-notification", HostId(cfg_.response.soc_host), std::nullopt,
                                "third party reports card data at drop sites"});
    if (!cfg_.response.removal_delay) return;
    engine_.schedule_at(engine_.now() + *cfg_.response.removal_delay, [this] {
      for (const auto& [id, host] : world_.topology().hosts()) {
        const bool dirty = std::any_of(host.processes.begin(), host.processes.end(),
                                       [&](const auto& kv) { return !legit_.contains({id, kv.first}); });
        if (dirty) alerts::remove_malware(world_, id, legit_, alerts_, std::nullopt, "cleanup after notification");
      }
    });
  }

  const ScenarioConfig& cfg_;
  const attack::BlackPosAgent& agent_;
  sim::Engine engine_;
  sim::World world_;
  integrity::IntegrityCenter center_;
  segmentation::PolicyGate gate_;
  alerts::DetectorSuite detectors_;
  alerts::Soc soc_;

  std::vector<payment::CardRecord> cards_;
  payment::AcquirerLedger ledger_;
  std::vector<HostId> pos_hosts_;
  std::map<HostId, sim::ProcessId> pos_pid_;
  std::map<HostId, std::size_t> next_slot_;
  std::set<std::pair<HostId, sim::ProcessId>> legit_;

  std::map<HostId, attack::AgentInstance> agents_;
  std::map<HostId, sim::ProcessId> exfil_pid_;
  attack::RepoStores repos_;
  bool collection_started_ = false;
  bool exfil_started_ = false;
  bool drops_hold_data_ = false;

  std::vector<alerts::Alert> alerts_;
  std::vector<std::uint64_t> pending_;
};

}  // namespace

RunOutput simulate(const ScenarioConfig& cfg, std::uint64_t seed) {
  RunOutput out;
  Run run(cfg, seed);
  out.log = run.finish(seed, out.report);
  return out;
}

Report run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) { return simulate(cfg, seed).report; }

}  // namespace breachsim::scenario
