#include "breachsim/alerts/correlation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "breachsim/alerts/artifacts.hpp"

namespace breachsim::alerts {

namespace {

using Key = std::tuple<std::uint64_t, sim::Minutes, std::uint64_t>;

Key order_key(const Alert& a) {
  std::uint64_t first = UINT64_MAX;
  for (const auto& ev : a.evidence) first = std::min(first, ev.seq);
  return {first, a.timestamp, a.id};
}

std::set<std::string> produced(const Alert& a) {
  std::set<std::string> s;
  for (const auto& ev : a.evidence) s.insert(ev.produces.begin(), ev.produces.end());
  return s;
}

std::vector<std::string> shared(const Alert& from, const Alert& to) {
  const auto p = produced(from);
  std::set<std::string> hits;
  for (const auto& ev : to.evidence) {
    for (const auto& c : ev.consumes) {
      if (p.contains(c)) hits.insert(c);
    }
  }
  return {hits.begin(), hits.end()};
}

Severity chain_severity(const std::vector<const Alert*>& members) {
  Severity s = Severity::Info;
  bool scan = false, write = false, egress = false;
  for (const Alert* a : members) {
    s = std::max(s, a->severity);
    for (const auto& ev : a->evidence) {
      scan = scan || ev.kind == "memory-scan";
      write = write || ev.kind == "file-write";
      egress = egress || ev.kind == kFlowEgress;
    }
  }
  return scan && write && egress ? Severity::Critical : s;
}

}  // namespace

std::vector<PlotChain> correlate(const std::vector<Alert>& input, std::size_t max_chains) {
  std::vector<const Alert*> alerts;
  for (const auto& a : input) alerts.push_back(&a);
  std::sort(alerts.begin(), alerts.end(), [](const Alert* x, const Alert* y) { return order_key(*x) < order_key(*y); });
  const std::size_t n = alerts.size();

  // consumers indexed by artifact so edge building stays near-linear
  std::map<std::string, std::vector<std::size_t>> consumers;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> seen;
    for (const auto& ev : alerts[i]->evidence) {
      for (const auto& c : ev.consumes) {
        if (seen.insert(c).second) consumers[c].push_back(i);
      }
    }
  }
  std::vector<std::vector<std::size_t>> out_edges(n);
  std::vector<bool> has_in(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> targets;
    for (const auto& p : produced(*alerts[i])) {
      auto it = consumers.find(p);
      if (it == consumers.end()) continue;
      for (std::size_t j : it->second) {
        if (j > i) targets.insert(j);
      }
    }
    out_edges[i].assign(targets.begin(), targets.end());
    for (std::size_t j : targets) has_in[j] = true;
  }

  std::vector<PlotChain> chains;
  std::vector<std::size_t> path;
  auto emit = [&]() {
    PlotChain c;
    std::vector<const Alert*> members;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Alert* a = alerts[path[k]];
      members.push_back(a);
      c.alert_ids.push_back(a->id);
      if (k > 0) c.links.push_back({alerts[path[k - 1]]->id, a->id, shared(*alerts[path[k - 1]], *a)});
    }
    c.severity = chain_severity(members);
    chains.push_back(std::move(c));
  };
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    if (chains.size() >= max_chains) return;
    path.push_back(v);
    if (out_edges[v].empty()) {
      emit();
    } else {
      for (std::size_t w : out_edges[v]) self(self, w);
    }
    path.pop_back();
  };
  for (std::size_t i = 0; i < n && chains.size() < max_chains; ++i) {
    if (!has_in[i]) dfs(dfs, i);
  }
  return chains;
}

bool chain_sound(const PlotChain& c, const std::vector<Alert>& alerts) {
  std::map<std::uint64_t, const Alert*> by_id;
  for (const auto& a : alerts) by_id[a.id] = &a;
  for (std::size_t k = 1; k < c.alert_ids.size(); ++k) {
    auto f = by_id.find(c.alert_ids[k - 1]);
    auto t = by_id.find(c.alert_ids[k]);
    if (f == by_id.end() || t == by_id.end() || shared(*f->second, *t->second).empty()) return false;
  }
  return true;
}

}  // namespace breachsim::alerts
