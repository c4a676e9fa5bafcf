#include "breachsim/scenario/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace breachsim::scenario {

using json = nlohmann::ordered_json;
using Issues = std::vector<ConfigIssue>;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid scenario:";
  for (const auto& i : issues) out += "\n  " + (i.path.empty() ? std::string("/") : i.path) + ": " + i.message;
  return out;
}

const std::set<std::string> kActions{"phish",        "break-in",    "takeover-repos", "deploy-agent",
                                     "start-collection", "deploy-exfil", "start-exfil"};

// ---- reading ---------------------------------------------------------------

class Reader {
 public:
  explicit Reader(Issues& issues) : issues_(issues) {}

  void issue(const std::string& path, std::string msg) { issues_.push_back({path, std::move(msg)}); }

  /// Visits the keys of an object, rejecting unknown ones.
  class Obj {
   public:
    Obj(Reader& r, const json& j, std::string path) : r_(r), j_(j), path_(std::move(path)) {
      if (!j_.is_object()) {
        r_.issue(path_, "expected an object");
        ok_ = false;
      }
    }
    Obj(const Obj&) = delete;
    ~Obj() {
      if (!ok_) return;
      for (const auto& [k, v] : j_.items()) {
        if (!used_.contains(k)) r_.issue(path_ + "/" + k, "unknown key");
      }
    }

    bool ok() const { return ok_; }
    const std::string& path() const { return path_; }

    template <class F>
    void field(const std::string& key, bool required, F&& f) {
      if (!ok_) return;
      used_.insert(key);
      auto it = j_.find(key);
      if (it == j_.end()) {
        if (required) r_.issue(path_ + "/" + key, "missing required key");
        return;
      }
      f(*it, path_ + "/" + key);
    }

   private:
    Reader& r_;
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
    bool ok_ = true;
  };

  bool str(const json& j, const std::string& p, std::string& out) {
    if (!j.is_string()) {
      issue(p, "expected a string");
      return false;
    }
    out = j.get<std::string>();
    return true;
  }
  bool boolean(const json& j, const std::string& p, bool& out) {
    if (!j.is_boolean()) {
      issue(p, "expected true or false");
      return false;
    }
    out = j.get<bool>();
    return true;
  }
  template <class Int>
  bool integer(const json& j, const std::string& p, Int& out) {
    if (!j.is_number_integer()) {
      issue(p, "expected an integer");
      return false;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (j.is_number_unsigned()) {
        out = static_cast<Int>(j.get<std::uint64_t>());
        return true;
      }
      if (j.get<std::int64_t>() < 0) {
        issue(p, "expected a non-negative integer");
        return false;
      }
    }
    out = static_cast<Int>(j.get<std::int64_t>());
    return true;
  }
  bool strings(const json& j, const std::string& p, std::vector<std::string>& out) {
    if (!j.is_array()) {
      issue(p, "expected an array of strings");
      return false;
    }
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::string s;
      if (str(j[i], p + "/" + std::to_string(i), s)) out.push_back(std::move(s));
    }
    return true;
  }
  bool pair(const json& j, const std::string& p, std::pair<std::string, std::string>& out) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
      issue(p, "expected a [string, string] pair");
      return false;
    }
    out = {j[0].get<std::string>(), j[1].get<std::string>()};
    return true;
  }
  bool clock(const json& j, const std::string& p, sim::Minutes& out) {
    std::string s;
    if (!str(j, p, s)) return false;
    auto v = parse_clock(s);
    if (!v) {
      issue(p, "expected HH:MM, got \"" + s + "\"");
      return false;
    }
    out = *v;
    return true;
  }
  bool timestamp(const json& j, const std::string& p, const Date& epoch, sim::Minutes& out) {
    std::string s;
    if (!str(j, p, s)) return false;
    auto v = parse_timestamp(s, epoch);
    if (!v) {
      issue(p, "expected \"YYYY-MM-DD HH:MM\", got \"" + s + "\"");
      return false;
    }
    out = *v;
    return true;
  }
  bool severity(const json& j, const std::string& p, sim::Severity& out) {
    std::string s;
    if (!str(j, p, s)) return false;
    auto v = sim::parse_severity(s);
    if (!v) {
      issue(p, "unknown severity \"" + s + "\"");
      return false;
    }
    out = *v;
    return true;
  }
  bool role(const json& j, const std::string& p, sim::HostRole& out) {
    std::string s;
    if (!str(j, p, s)) return false;
    auto v = sim::parse_host_role(s);
    if (!v) {
      issue(p, "unknown host role \"" + s + "\"");
      return false;
    }
    out = *v;
    return true;
  }
  template <class T, class F>
  void array(const json& j, const std::string& p, std::vector<T>& out, F&& item) {
    if (!j.is_array()) {
      issue(p, "expected an array");
      return;
    }
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      T v{};
      item(j[i], p + "/" + std::to_string(i), v);
      out.push_back(std::move(v));
    }
  }

 private:
  Issues& issues_;
};

using Obj = Reader::Obj;

void read_network(Reader& r, const json& j, const std::string& p, ScenarioConfig& c) {
  Obj o(r, j, p);
  o.field("segments", true, [&](const json& v, const std::string& q) { r.strings(v, q, c.segments); });
  o.field("adjacency", false, [&](const json& v, const std::string& q) {
    r.array(v, q, c.adjacency, [&](const json& e, const std::string& eq, auto& out) { r.pair(e, eq, out); });
  });
  o.field("domain_credentials", false,
          [&](const json& v, const std::string& q) { r.strings(v, q, c.domain_credentials); });
  o.field("hosts", false, [&](const json& v, const std::string& q) {
    r.array(v, q, c.hosts, [&](const json& e, const std::string& eq, HostSpec& h) {
      Obj ho(r, e, eq);
      ho.field("id", true, [&](const json& x, const std::string& xq) { r.str(x, xq, h.id); });
      ho.field("segment", true, [&](const json& x, const std::string& xq) { r.str(x, xq, h.segment); });
      ho.field("role", true, [&](const json& x, const std::string& xq) { r.role(x, xq, h.role); });
      ho.field("site", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, h.site); });
      ho.field("credentials", false, [&](const json& x, const std::string& xq) { r.strings(x, xq, h.credentials); });
    });
  });
  o.field("groups", false, [&](const json& v, const std::string& q) {
    r.array(v, q, c.groups, [&](const json& e, const std::string& eq, HostGroup& g) {
      Obj go(r, e, eq);
      go.field("name", true, [&](const json& x, const std::string& xq) { r.str(x, xq, g.name); });
      go.field("count", true, [&](const json& x, const std::string& xq) { r.integer(x, xq, g.count); });
      go.field("segment", true, [&](const json& x, const std::string& xq) { r.str(x, xq, g.segment); });
      go.field("role", true, [&](const json& x, const std::string& xq) { r.role(x, xq, g.role); });
      go.field("sites", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, g.sites); });
      go.field("credentials", false, [&](const json& x, const std::string& xq) { r.strings(x, xq, g.credentials); });
    });
  });
}

void read_payment(Reader& r, const json& j, const std::string& p, PaymentConfig& pc) {
  Obj o(r, j, p);
  o.field("cards", false, [&](const json& v, const std::string& q) { r.integer(v, q, pc.cards); });
  o.field("tokenization", false, [&](const json& v, const std::string& q) { r.boolean(v, q, pc.tokenization); });
  o.field("merchant", false, [&](const json& v, const std::string& q) { r.str(v, q, pc.merchant); });
  o.field("memory_bytes", false, [&](const json& v, const std::string& q) { r.integer(v, q, pc.memory_bytes); });
  o.field("pos_process", false, [&](const json& v, const std::string& q) { r.str(v, q, pc.pos_process); });
  o.field("swipes", false, [&](const json& v, const std::string& q) {
    Obj s(r, v, q);
    s.field("first", false, [&](const json& x, const std::string& xq) { r.clock(x, xq, pc.swipes.first); });
    s.field("last", false, [&](const json& x, const std::string& xq) { r.clock(x, xq, pc.swipes.last); });
    s.field("every", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, pc.swipes.every); });
    s.field("cards", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, pc.swipes.cards); });
  });
}

void read_traffic(Reader& r, const json& j, const std::string& p, std::vector<RecurringFlow>& out) {
  r.array(j, p, out, [&](const json& e, const std::string& q, RecurringFlow& f) {
    Obj o(r, e, q);
    o.field("src", true, [&](const json& v, const std::string& vq) { r.str(v, vq, f.src); });
    o.field("dst", true, [&](const json& v, const std::string& vq) { r.str(v, vq, f.dst); });
    o.field("channel", true, [&](const json& v, const std::string& vq) { r.str(v, vq, f.channel); });
    o.field("credential", false, [&](const json& v, const std::string& vq) {
      std::string s;
      if (r.str(v, vq, s)) f.credential = s;
    });
    o.field("at", true, [&](const json& v, const std::string& vq) { r.clock(v, vq, f.at); });
    o.field("bytes", false, [&](const json& v, const std::string& vq) { r.integer(v, vq, f.bytes); });
  });
}

void read_agent(Reader& r, const json& j, const std::string& p, AgentConfig& ac) {
  attack::BlackPosAgent& a = ac.agent;
  Obj o(r, j, p);
  auto s = [&](const char* key, std::string& out) {
    o.field(key, false, [&](const json& v, const std::string& q) { r.str(v, q, out); });
  };
  s("service", a.service_name);
  o.field("targets", false, [&](const json& v, const std::string& q) { r.strings(v, q, a.target_processes); });
  o.field("chunk_size", false, [&](const json& v, const std::string& q) { r.integer(v, q, a.chunk_size); });
  s("staging_path", a.staging_path);
  o.field("key", true, [&](const json& v, const std::string& q) {
    std::string hex;
    if (!r.str(v, q, hex)) return;
    auto bytes = sim::from_hex(hex);
    if (!bytes || bytes->size() != a.key.size()) {
      r.issue(q, "expected 64 hex digits");
      return;
    }
    std::copy(bytes->begin(), bytes->end(), a.key.begin());
  });
  o.field("office_hours", false, [&](const json& v, const std::string& q) {
    if (!v.is_array() || v.size() != 2) {
      r.issue(q, "expected [\"HH:MM\", \"HH:MM\"]");
      return;
    }
    r.clock(v[0], q + "/0", a.office_start);
    r.clock(v[1], q + "/1", a.office_end);
  });
  auto hosts = [&](const char* key, std::vector<sim::HostId>& out) {
    o.field(key, false, [&](const json& v, const std::string& q) {
      std::vector<std::string> ids;
      if (!r.strings(v, q, ids)) return;
      out.clear();
      for (auto& id : ids) out.emplace_back(std::move(id));
    });
  };
  hosts("repos", a.repo_hosts);
  hosts("drops", a.drop_hosts);
  o.field("obfuscated", false, [&](const json& v, const std::string& q) { r.boolean(v, q, a.obfuscated); });
  o.field("encrypted", false, [&](const json& v, const std::string& q) { r.boolean(v, q, a.encrypted); });
  o.field("target_roles", false, [&](const json& v, const std::string& q) {
    if (!v.is_array()) {
      r.issue(q, "expected an array of roles");
      return;
    }
    a.target_roles.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      sim::HostRole role{};
      if (r.role(v[i], q + "/" + std::to_string(i), role)) a.target_roles.insert(role);
    }
  });
  o.field("capture", false, [&](const json& v, const std::string& q) {
    std::string m;
    if (!r.str(v, q, m)) return;
    auto mode = attack::parse_capture_mode(m);
    if (!mode) r.issue(q, "unknown capture mode \"" + m + "\"");
    else a.capture = *mode;
  });
  s("upload_channel", a.upload_channel);
  s("repo_credential", a.repo_credential);
  s("repo_password", a.repo_password);
  s("repo_path", a.repo_path);
  s("exfil_process", a.exfil_process);
  s("exfil_channel", a.exfil_channel);
  s("drop_credential", a.drop_credential);
  s("process_name", ac.process_name);
  o.field("scan_every", false, [&](const json& v, const std::string& q) { r.integer(v, q, ac.scan_every); });
  o.field("scan_offset", false, [&](const json& v, const std::string& q) { r.integer(v, q, ac.scan_offset); });
  o.field("upload_minute", false, [&](const json& v, const std::string& q) { r.integer(v, q, ac.upload_minute); });
  o.field("relay_minute", false, [&](const json& v, const std::string& q) { r.integer(v, q, ac.relay_minute); });
}

void read_plan(Reader& r, const json& j, const std::string& p, const Date& epoch, std::vector<PlanStep>& out) {
  r.array(j, p, out, [&](const json& e, const std::string& q, PlanStep& s) {
    Obj o(r, e, q);
    o.field("at", true, [&](const json& v, const std::string& vq) { r.timestamp(v, vq, epoch, s.at); });
    o.field("action", true, [&](const json& v, const std::string& vq) { r.str(v, vq, s.action); });
    o.field("host", false, [&](const json& v, const std::string& vq) { r.str(v, vq, s.host); });
    o.field("via", false, [&](const json& v, const std::string& vq) { r.str(v, vq, s.via); });
    o.field("targets", false, [&](const json& v, const std::string& vq) { r.strings(v, vq, s.targets); });
    o.field("channel", false, [&](const json& v, const std::string& vq) { r.str(v, vq, s.channel); });
    o.field("credential", false, [&](const json& v, const std::string& vq) { r.str(v, vq, s.credential); });
    o.field("account", false, [&](const json& v, const std::string& vq) { r.str(v, vq, s.account); });
    o.field("version", false, [&](const json& v, const std::string& vq) { r.integer(v, vq, s.version); });
  });
}

void read_defense(Reader& r, const json& j, const std::string& p, ScenarioConfig& c) {
  Obj o(r, j, p);
  o.field("integrity", false, [&](const json& v, const std::string& q) {
    Obj io(r, v, q);
    io.field("enforce", false, [&](const json& x, const std::string& xq) { r.boolean(x, xq, c.integrity.enforce); });
    io.field("center", false, [&](const json& x, const std::string& xq) { r.str(x, xq, c.integrity.center); });
  });
  o.field("segmentation", false, [&](const json& v, const std::string& q) {
    auto& sc = c.segmentation;
    auto& pol = sc.policy;
    Obj so(r, v, q);
    so.field("kind", true, [&](const json& x, const std::string& xq) {
      std::string k;
      if (!r.str(x, xq, k)) return;
      auto kind = segmentation::parse_policy_kind(k);
      if (!kind) r.issue(xq, "unknown policy kind \"" + k + "\"");
      else pol.kind = *kind;
    });
    so.field("vlan_allow", false, [&](const json& x, const std::string& xq) {
      std::vector<std::pair<std::string, std::string>> pairs;
      r.array(x, xq, pairs, [&](const json& e, const std::string& eq, auto& out) { r.pair(e, eq, out); });
      pol.vlan_allow = {pairs.begin(), pairs.end()};
    });
    so.field("credential_bypass", false,
             [&](const json& x, const std::string& xq) { r.boolean(x, xq, pol.credential_bypass); });
    so.field("monitor_all", false, [&](const json& x, const std::string& xq) { r.boolean(x, xq, pol.monitor_all); });
    so.field("matrix", false, [&](const json& x, const std::string& xq) {
      std::vector<segmentation::AuthzEntry> entries;
      r.array(x, xq, entries, [&](const json& e, const std::string& eq, segmentation::AuthzEntry& a) {
        Obj ao(r, e, eq);
        ao.field("credential", true, [&](const json& y, const std::string& yq) { r.str(y, yq, a.credential); });
        ao.field("src", true, [&](const json& y, const std::string& yq) { r.str(y, yq, a.src_segment); });
        ao.field("dst", true, [&](const json& y, const std::string& yq) { r.str(y, yq, a.dst_segment); });
        ao.field("channel", true, [&](const json& y, const std::string& yq) { r.str(y, yq, a.channel); });
      });
      pol.matrix = {entries.begin(), entries.end()};
    });
    so.field("behavior", false, [&](const json& x, const std::string& xq) {
      Obj bo(r, x, xq);
      bo.field("enabled", true, [&](const json& y, const std::string& yq) { r.boolean(y, yq, sc.behavior); });
      bo.field("warmup", false, [&](const json& y, const std::string& yq) { r.integer(y, yq, sc.warmup); });
    });
  });
  o.field("alerts", false, [&](const json& v, const std::string& q) {
    auto& ac = c.alerts;
    Obj ao(r, v, q);
    ao.field("detectors", false, [&](const json& x, const std::string& xq) {
      auto& d = ac.detectors;
      Obj d_o(r, x, xq);
      d_o.field("signature", false, [&](const json& y, const std::string& yq) { r.boolean(y, yq, d.signature); });
      d_o.field("behavior", false, [&](const json& y, const std::string& yq) { r.boolean(y, yq, d.behavior); });
      d_o.field("dlp", false, [&](const json& y, const std::string& yq) { r.boolean(y, yq, d.dlp); });
      d_o.field("flow_anomaly", false, [&](const json& y, const std::string& yq) { r.boolean(y, yq, d.flow_anomaly); });
      d_o.field("indicators", false, [&](const json& y, const std::string& yq) { r.strings(y, yq, d.indicators); });
      d_o.field("scraper_scans", false,
                [&](const json& y, const std::string& yq) { r.integer(y, yq, d.scraper_scans); });
      d_o.field("system_dirs", false, [&](const json& y, const std::string& yq) { r.strings(y, yq, d.system_dirs); });
      d_o.field("pos_channels", false, [&](const json& y, const std::string& yq) {
        std::vector<std::string> ch;
        if (r.strings(y, yq, ch)) d.pos_channels = {ch.begin(), ch.end()};
      });
    });
    ao.field("escalation", false, [&](const json& x, const std::string& xq) {
      auto& e = ac.escalation;
      Obj eo(r, x, xq);
      eo.field("deadlines", false, [&](const json& y, const std::string& yq) {
        Obj dl(r, y, yq);
        for (auto s : {sim::Severity::Info, sim::Severity::Minor, sim::Severity::Major, sim::Severity::Critical}) {
          dl.field(std::string(sim::to_string(s)), false,
                   [&](const json& z, const std::string& zq) { r.integer(z, zq, e.deadlines[s]); });
        }
      });
      eo.field("floor", false, [&](const json& y, const std::string& yq) { r.severity(y, yq, e.floor); });
      eo.field("cap", false, [&](const json& y, const std::string& yq) { r.severity(y, yq, e.cap); });
    });
    ao.field("routing", false, [&](const json& x, const std::string& xq) {
      r.array(x, xq, ac.routing, [&](const json& e, const std::string& eq, alerts::RoutingRule& rule) {
        Obj ro(r, e, eq);
        ro.field("min", false, [&](const json& y, const std::string& yq) { r.severity(y, yq, rule.min); });
        ro.field("max", false, [&](const json& y, const std::string& yq) { r.severity(y, yq, rule.max); });
        ro.field("types", false, [&](const json& y, const std::string& yq) { r.str(y, yq, rule.type_pattern); });
        ro.field("channels", true, [&](const json& y, const std::string& yq) { r.strings(y, yq, rule.channels); });
      });
    });
    ao.field("correlation_raise", false,
             [&](const json& x, const std::string& xq) { r.boolean(x, xq, ac.correlation_raise); });
    ao.field("tick_every", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, ac.tick_every); });
  });
  o.field("soc", false, [&](const json& v, const std::string& q) {
    Obj so(r, v, q);
    so.field("mode", true, [&](const json& x, const std::string& xq) {
      std::string m;
      if (!r.str(x, xq, m)) return;
      auto mode = alerts::parse_soc_mode(m);
      if (!mode) r.issue(xq, "unknown soc mode \"" + m + "\"");
      else c.soc.mode = *mode;
    });
    so.field("n", false, [&](const json& x, const std::string& xq) { r.integer(x, xq, c.soc.n); });
  });
}

void read_response(Reader& r, const json& j, const std::string& p, const Date& epoch, ResponseConfig& rc) {
  Obj o(r, j, p);
  o.field("soc_host", false, [&](const json& v, const std::string& q) { r.str(v, q, rc.soc_host); });
  o.field("notify_at", false, [&](const json& v, const std::string& q) {
    sim::Minutes t = 0;
    if (r.timestamp(v, q, epoch, t)) rc.notify_at = t;
  });
  o.field("notify_when", false, [&](const json& v, const std::string& q) { r.str(v, q, rc.notify_when); });
  o.field("removal_delay", false, [&](const json& v, const std::string& q) {
    sim::Minutes d = 0;
    if (r.integer(v, q, d)) rc.removal_delay = d;
  });
}

// ---- writing ---------------------------------------------------------------

json strings_json(const std::vector<std::string>& v) { return json(v); }

json hosts_json(const std::vector<sim::HostId>& v) {
  json out = json::array();
  for (const auto& h : v) out.push_back(h.str());
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ScenarioConfig parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }

  ScenarioConfig c;
  Issues issues;
  Reader r(issues);
  {
    Obj o(r, root, "");
    o.field("name", true, [&](const json& v, const std::string& q) { r.str(v, q, c.name); });
    o.field("epoch", true, [&](const json& v, const std::string& q) {
      std::string s;
      if (!r.str(v, q, s)) return;
      auto d = parse_date(s);
      if (!d) r.issue(q, "expected YYYY-MM-DD, got \"" + s + "\"");
      else c.epoch = *d;
    });
    o.field("end", true, [&](const json& v, const std::string& q) { r.timestamp(v, q, c.epoch, c.duration); });
    o.field("seed", false, [&](const json& v, const std::string& q) { r.integer(v, q, c.seed); });
    o.field("network", true, [&](const json& v, const std::string& q) { read_network(r, v, q, c); });
    o.field("payment", false, [&](const json& v, const std::string& q) { read_payment(r, v, q, c.payment); });
    o.field("traffic", false, [&](const json& v, const std::string& q) { read_traffic(r, v, q, c.traffic); });
    o.field("agent", true, [&](const json& v, const std::string& q) { read_agent(r, v, q, c.agent); });
    o.field("plan", false, [&](const json& v, const std::string& q) { read_plan(r, v, q, c.epoch, c.plan); });
    o.field("defense", false, [&](const json& v, const std::string& q) { read_defense(r, v, q, c); });
    o.field("response", false, [&](const json& v, const std::string& q) { read_response(r, v, q, c.epoch, c.response); });
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioConfig& c) {
  json root;
  root["name"] = c.name;
  root["epoch"] = format_date(c.epoch);
  root["end"] = format_timestamp(c.duration, c.epoch);
  root["seed"] = c.seed;

  json net;
  net["segments"] = c.segments;
  json adj = json::array();
  for (const auto& [a, b] : c.adjacency) adj.push_back({a, b});
  net["adjacency"] = adj;
  net["domain_credentials"] = c.domain_credentials;
  json hosts = json::array();
  for (const auto& h : c.hosts) {
    hosts.push_back({{"id", h.id},
                     {"segment", h.segment},
                     {"role", sim::to_string(h.role)},
                     {"site", h.site},
                     {"credentials", h.credentials}});
  }
  net["hosts"] = hosts;
  json groups = json::array();
  for (const auto& g : c.groups) {
    groups.push_back({{"name", g.name},
                      {"count", g.count},
                      {"segment", g.segment},
                      {"role", sim::to_string(g.role)},
                      {"sites", g.sites},
                      {"credentials", g.credentials}});
  }
  net["groups"] = groups;
  root["network"] = net;

  const auto& pc = c.payment;
  root["payment"] = {{"cards", pc.cards},
                     {"tokenization", pc.tokenization},
                     {"merchant", pc.merchant},
                     {"memory_bytes", pc.memory_bytes},
                     {"pos_process", pc.pos_process},
                     {"swipes",
                      {{"first", format_clock(pc.swipes.first)},
                       {"last", format_clock(pc.swipes.last)},
                       {"every", pc.swipes.every},
                       {"cards", pc.swipes.cards}}}};

  json traffic = json::array();
  for (const auto& f : c.traffic) {
    json t{{"src", f.src}, {"dst", f.dst}, {"channel", f.channel}};
    if (f.credential) t["credential"] = *f.credential;
    t["at"] = format_clock(f.at);
    t["bytes"] = f.bytes;
    traffic.push_back(t);
  }
  root["traffic"] = traffic;

  const auto& a = c.agent.agent;
  json roles = json::array();
  for (auto role : a.target_roles) roles.push_back(sim::to_string(role));
  root["agent"] = {{"service", a.service_name},
                   {"process_name", c.agent.process_name},
                   {"targets", a.target_processes},
                   {"chunk_size", a.chunk_size},
                   {"staging_path", a.staging_path},
                   {"key", sim::to_hex(a.key)},
                   {"office_hours", {format_clock(a.office_start), format_clock(a.office_end)}},
                   {"repos", hosts_json(a.repo_hosts)},
                   {"drops", hosts_json(a.drop_hosts)},
                   {"obfuscated", a.obfuscated},
                   {"encrypted", a.encrypted},
                   {"target_roles", roles},
                   {"capture", attack::to_string(a.capture)},
                   {"upload_channel", a.upload_channel},
                   {"repo_credential", a.repo_credential},
                   {"repo_password", a.repo_password},
                   {"repo_path", a.repo_path},
                   {"exfil_process", a.exfil_process},
                   {"exfil_channel", a.exfil_channel},
                   {"drop_credential", a.drop_credential},
                   {"scan_every", c.agent.scan_every},
                   {"scan_offset", c.agent.scan_offset},
                   {"upload_minute", c.agent.upload_minute},
                   {"relay_minute", c.agent.relay_minute}};

  json plan = json::array();
  for (const auto& s : c.plan) {
    json step{{"at", format_timestamp(s.at, c.epoch)}, {"action", s.action}};
    if (!s.host.empty()) step["host"] = s.host;
    if (!s.via.empty()) step["via"] = s.via;
    if (!s.targets.empty()) step["targets"] = strings_json(s.targets);
    if (!s.channel.empty()) step["channel"] = s.channel;
    if (!s.credential.empty()) step["credential"] = s.credential;
    if (!s.account.empty()) step["account"] = s.account;
    if (s.version != 1) step["version"] = s.version;
    plan.push_back(step);
  }
  root["plan"] = plan;

  const auto& pol = c.segmentation.policy;
  json allow = json::array();
  for (const auto& [x, y] : pol.vlan_allow) allow.push_back({x, y});
  json matrix = json::array();
  for (const auto& e : pol.matrix) {
    matrix.push_back({{"credential", e.credential}, {"src", e.src_segment}, {"dst", e.dst_segment}, {"channel", e.channel}});
  }
  const auto& d = c.alerts.detectors;
  json deadlines;
  for (const auto& [s, m] : c.alerts.escalation.deadlines) deadlines[std::string(sim::to_string(s))] = m;
  json routing = json::array();
  for (const auto& rule : c.alerts.routing) {
    routing.push_back({{"min", sim::to_string(rule.min)},
                       {"max", sim::to_string(rule.max)},
                       {"types", rule.type_pattern},
                       {"channels", rule.channels}});
  }
  root["defense"] = {
      {"integrity", {{"enforce", c.integrity.enforce}, {"center", c.integrity.center}}},
      {"segmentation",
       {{"kind", segmentation::to_string(pol.kind)},
        {"vlan_allow", allow},
        {"credential_bypass", pol.credential_bypass},
        {"monitor_all", pol.monitor_all},
        {"matrix", matrix},
        {"behavior", {{"enabled", c.segmentation.behavior}, {"warmup", c.segmentation.warmup}}}}},
      {"alerts",
       {{"detectors",
         {{"signature", d.signature},
          {"behavior", d.behavior},
          {"dlp", d.dlp},
          {"flow_anomaly", d.flow_anomaly},
          {"indicators", d.indicators},
          {"scraper_scans", d.scraper_scans},
          {"system_dirs", d.system_dirs},
          {"pos_channels", std::vector<std::string>(d.pos_channels.begin(), d.pos_channels.end())}}},
        {"escalation",
         {{"deadlines", deadlines},
          {"floor", sim::to_string(c.alerts.escalation.floor)},
          {"cap", sim::to_string(c.alerts.escalation.cap)}}},
        {"routing", routing},
        {"correlation_raise", c.alerts.correlation_raise},
        {"tick_every", c.alerts.tick_every}}},
      {"soc", {{"mode", alerts::to_string(c.soc.mode)}, {"n", c.soc.n}}}};

  json resp{{"soc_host", c.response.soc_host}};
  if (c.response.notify_at) resp["notify_at"] = format_timestamp(*c.response.notify_at, c.epoch);
  resp["notify_when"] = c.response.notify_when;
  if (c.response.removal_delay) resp["removal_delay"] = *c.response.removal_delay;
  root["response"] = resp;
  return root.dump(2) + "\n";
}

std::vector<HostSpec> expand_hosts(const ScenarioConfig& c) {
  std::vector<HostSpec> out = c.hosts;
  for (const auto& g : c.groups) {
    for (int i = 0; i < g.count; ++i) {
      char num[16];
      std::snprintf(num, sizeof num, "%03d", i + 1);
      out.push_back(HostSpec{g.name + "-" + num, g.segment, g.role, g.sites > 0 ? i % g.sites : 0, g.credentials});
    }
  }
  return out;
}

std::vector<sim::HostId> resolve_hosts(const ScenarioConfig& c, const std::string& name) {
  for (const auto& g : c.groups) {
    if (g.name != name) continue;
    ScenarioConfig only;
    only.groups = {g};
    std::vector<sim::HostId> out;
    for (const auto& h : expand_hosts(only)) out.emplace_back(h.id);
    return out;
  }
  for (const auto& h : expand_hosts(c)) {
    if (h.id == name) return {sim::HostId(name)};
  }
  return {};
}

void validate(const ScenarioConfig& c) {
  Issues issues;
  auto issue = [&](std::string path, std::string msg) { issues.push_back({std::move(path), std::move(msg)}); };

  if (c.name.empty()) issue("/name", "must be non-empty");
  if (c.duration < 0) issue("/end", "end is before the epoch");

  std::set<std::string> segs;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    if (c.segments[i].empty()) issue("/network/segments/" + std::to_string(i), "segment name must be non-empty");
    if (!segs.insert(c.segments[i]).second) issue("/network/segments/" + std::to_string(i), "duplicate segment " + c.segments[i]);
  }
  for (std::size_t i = 0; i < c.adjacency.size(); ++i) {
    for (const auto& s : {c.adjacency[i].first, c.adjacency[i].second}) {
      if (!segs.contains(s)) issue("/network/adjacency/" + std::to_string(i), "unknown segment " + s);
    }
  }

  std::map<std::string, sim::HostRole> roles;
  auto check_host = [&](const std::string& path, const std::string& id, const std::string& seg, sim::HostRole role) {
    if (id.empty()) issue(path + "/id", "host id must be non-empty");
    if (!segs.contains(seg)) issue(path + "/segment", "host " + id + " is in unknown segment " + seg);
    if (role == sim::HostRole::ExternalDrop && seg != sim::kExternalSegment) {
      issue(path + "/segment", "external-drop host " + id + " must be in the external segment");
    }
  };
  for (std::size_t i = 0; i < c.hosts.size(); ++i) {
    const auto& h = c.hosts[i];
    const std::string path = "/network/hosts/" + std::to_string(i);
    check_host(path, h.id, h.segment, h.role);
    if (!roles.emplace(h.id, h.role).second) issue(path + "/id", "duplicate host " + h.id);
  }
  for (std::size_t i = 0; i < c.groups.size(); ++i) {
    const auto& g = c.groups[i];
    const std::string path = "/network/groups/" + std::to_string(i);
    if (g.count <= 0) issue(path + "/count", "group needs at least one host");
    if (g.sites <= 0) issue(path + "/sites", "sites must be positive");
    check_host(path, g.name, g.segment, g.role);
    for (const auto& h : resolve_hosts(c, g.name)) {
      if (!roles.emplace(h.str(), g.role).second) issue(path + "/name", "group host " + h.str() + " collides with another host");
    }
  }
  auto known = [&](const std::string& name) { return roles.contains(name) || !resolve_hosts(c, name).empty(); };
  auto role_of = [&](const std::string& id) { return roles.contains(id) ? std::optional(roles.at(id)) : std::nullopt; };

  const auto& pc = c.payment;
  if (pc.memory_bytes < 64) issue("/payment/memory_bytes", "must be at least 64");
  if (pc.swipes.every <= 0) issue("/payment/swipes/every", "must be positive");
  if (pc.swipes.first > pc.swipes.last) issue("/payment/swipes", "first swipe after last swipe");
  if (pc.cards == 0 && pc.swipes.cards > 0) issue("/payment/cards", "card pool is empty");
  if (pc.pos_process.empty()) issue("/payment/pos_process", "must be non-empty");

  for (std::size_t i = 0; i < c.traffic.size(); ++i) {
    const auto& f = c.traffic[i];
    const std::string path = "/traffic/" + std::to_string(i);
    if (!known(f.src)) issue(path + "/src", "unknown host or group " + f.src);
    if (!known(f.dst)) issue(path + "/dst", "unknown host or group " + f.dst);
    if (f.channel.empty()) issue(path + "/channel", "must be non-empty");
    if (f.at >= sim::kMinutesPerDay) issue(path + "/at", "must be before 24:00");
    if (f.bytes == 0) issue(path + "/bytes", "must be positive");
  }

  const auto& ag = c.agent;
  const auto& a = ag.agent;
  if (a.chunk_size == 0) issue("/agent/chunk_size", "must be positive");
  if (a.office_start >= a.office_end) issue("/agent/office_hours", "window must be non-empty");
  if (a.service_name.empty()) issue("/agent/service", "must be non-empty");
  for (std::size_t i = 0; i < a.repo_hosts.size(); ++i) {
    auto r = role_of(a.repo_hosts[i].str());
    if (!r) issue("/agent/repos/" + std::to_string(i), "unknown host " + a.repo_hosts[i].str());
    else if (*r == sim::HostRole::ExternalDrop) issue("/agent/repos/" + std::to_string(i), "repo host must be internal");
  }
  for (std::size_t i = 0; i < a.drop_hosts.size(); ++i) {
    auto r = role_of(a.drop_hosts[i].str());
    if (!r) issue("/agent/drops/" + std::to_string(i), "unknown host " + a.drop_hosts[i].str());
    else if (*r != sim::HostRole::ExternalDrop) issue("/agent/drops/" + std::to_string(i), "drop host must be an external-drop");
  }
  if (ag.scan_every <= 0) issue("/agent/scan_every", "must be positive");
  if (ag.scan_offset < 0) issue("/agent/scan_offset", "must be non-negative");
  if (ag.upload_minute < 0 || ag.upload_minute >= 60) issue("/agent/upload_minute", "must be within the hour");
  if (ag.relay_minute < 0 || ag.relay_minute >= 60) issue("/agent/relay_minute", "must be within the hour");

  for (std::size_t i = 0; i < c.plan.size(); ++i) {
    const auto& s = c.plan[i];
    const std::string path = "/plan/" + std::to_string(i);
    if (s.at < 0) issue(path + "/at", "step before the epoch");
    if (!kActions.contains(s.action)) {
      issue(path + "/action", "unknown action " + s.action);
      continue;
    }
    auto need_host = [&](const char* key, const std::string& v) {
      if (v.empty()) issue(path + "/" + key, "required for " + s.action);
      else if (!roles.contains(v)) issue(path + "/" + key, "unknown host " + v);
    };
    if (s.action == "phish") {
      need_host("host", s.host);
      if (s.credential.empty()) issue(path + "/credential", "required for phish");
    } else if (s.action == "break-in") {
      need_host("via", s.via);
      need_host("host", s.host);
    } else if (s.action == "takeover-repos" || s.action == "deploy-agent" || s.action == "deploy-exfil") {
      need_host("via", s.via);
      if (s.targets.empty()) issue(path + "/targets", "required for " + s.action);
      for (std::size_t t = 0; t < s.targets.size(); ++t) {
        if (!known(s.targets[t])) issue(path + "/targets/" + std::to_string(t), "unknown host or group " + s.targets[t]);
      }
      if (s.action == "takeover-repos" && s.account.empty()) issue(path + "/account", "required for takeover-repos");
    }
    if ((s.action == "break-in" || s.action == "takeover-repos" || s.action == "deploy-agent" ||
         s.action == "deploy-exfil") && s.channel.empty()) {
      issue(path + "/channel", "required for " + s.action);
    }
  }

  if (!roles.contains(c.integrity.center)) issue("/defense/integrity/center", "unknown host " + c.integrity.center);
  else if (roles.at(c.integrity.center) != sim::HostRole::IntegrityCenter) {
    issue("/defense/integrity/center", "host " + c.integrity.center + " is not an integrity-center");
  }
  const auto& pol = c.segmentation.policy;
  for (const auto& [x, y] : pol.vlan_allow) {
    if (!segs.contains(x) || !segs.contains(y)) issue("/defense/segmentation/vlan_allow", "unknown segment in " + x + " -> " + y);
  }
  for (const auto& e : pol.matrix) {
    if (!segs.contains(e.src_segment) || !segs.contains(e.dst_segment)) {
      issue("/defense/segmentation/matrix", "unknown segment in entry for " + e.credential);
    }
  }
  try {
    alerts::validate(c.alerts.escalation);
  } catch (const std::exception& e) {
    issue("/defense/alerts/escalation", e.what());
  }
  try {
    alerts::validate_routing(c.alerts.routing);
  } catch (const std::exception& e) {
    issue("/defense/alerts/routing", e.what());
  }
  if (c.alerts.tick_every <= 0) issue("/defense/alerts/tick_every", "must be positive");
  if (c.soc.n == 0) issue("/defense/soc/n", "must be at least 1");

  if (!roles.contains(c.response.soc_host)) issue("/response/soc_host", "unknown host " + c.response.soc_host);
  if (c.response.notify_when != "drops-hold-data" && c.response.notify_when != "always") {
    issue("/response/notify_when", "expected drops-hold-data or always");
  }
  if (c.response.removal_delay && *c.response.removal_delay < 0) issue("/response/removal_delay", "must be non-negative");

  if (!issues.empty()) throw ValidationError(std::move(issues));
}

sim::Topology build_topology(const ScenarioConfig& c) {
  sim::Topology t;
  for (const auto& s : c.segments) t.add_segment(s);
  for (const auto& [a, b] : c.adjacency) t.connect(a, b);
  for (const auto& cred : c.domain_credentials) t.add_domain_credential(cred);
  for (const auto& spec : expand_hosts(c)) {
    sim::Host h;
    h.id = sim::HostId(spec.id);
    h.segment = spec.segment;
    h.role = spec.role;
    h.site = spec.site;
    h.credentials = {spec.credentials.begin(), spec.credentials.end()};
    t.add_host(std::move(h));
  }
  return t;
}

}  // namespace breachsim::scenario
