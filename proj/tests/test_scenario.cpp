#include <fstream>
#include <sstream>

#include "breachsim/payment/card.hpp"
#include "breachsim/scenario/config.hpp"
#include "breachsim/scenario/presets.hpp"
#include "breachsim/scenario/report.hpp"
#include "breachsim/scenario/runner.hpp"
#include "breachsim/scenario/timefmt.hpp"
#include "doctest.h"

using namespace breachsim;
using namespace breachsim::scenario;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tiny_text() { return slurp(std::string(GOLDEN_DIR) + "/../data/tiny.json"); }

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<ConfigIssue>& is, const std::string& path, const std::string& fragment) {
  for (const auto& i : is) {
    if (i.path == path && i.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

// Checks that hold for any run, whatever the configuration.
void check_invariants(const ScenarioConfig& cfg, const RunOutput& out) {
  const Report& r = out.report;
  CHECK(r.records_exfiltrated <= r.records_staged);
  CHECK(r.records_staged <= r.records_scraped);
  CHECK(r.bytes_exfiltrated <= r.bytes_staged);
  CHECK(r.flows_attempted == r.flows_delivered + r.flows_denied);
  CHECK(r.agent_flows_outside_hours == 0);
  if (r.dwell_time) CHECK(*r.dwell_time == *r.detection_time - *r.breach_start);
  CHECK(r.events == out.log.size());

  const sim::Topology topo = build_topology(cfg);
  for (std::size_t i = 0; i < out.log.size(); ++i) {
    const sim::Event& e = out.log[i];
    REQUIRE(e.seq == i);
    if (i > 0) REQUIRE(out.log[i - 1].time <= e.time);
    REQUIRE(e.time <= cfg.duration);
    for (const auto& h : sim::referenced_hosts(e)) REQUIRE(topo.contains(h));
  }
  // milestones are in timeline order and never precede their predecessors
  for (std::size_t i = 1; i < r.milestones.size(); ++i) {
    CHECK(r.milestones[i - 1].time <= r.milestones[i].time);
  }
}

}  // namespace

TEST_CASE("dates, timestamps, clocks") {
  CHECK(parse_date("2013-11-27") == Date{2013, 11, 27});
  CHECK_FALSE(parse_date("2013-02-30").has_value());
  CHECK(parse_date("2012-02-29").has_value());
  CHECK_FALSE(parse_date("2013-2-3").has_value());
  const Date epoch{2013, 9, 1};
  CHECK(parse_timestamp("2013-09-01 00:00", epoch) == 0);
  CHECK(parse_timestamp("2013-09-02 01:30", epoch) == 24 * 60 + 90);
  CHECK(parse_timestamp("2013-12-15 12:00", epoch) == 105 * 1440 + 720);
  CHECK_FALSE(parse_timestamp("2013-09-01 24:30", epoch).has_value());
  CHECK_FALSE(parse_timestamp("2013-09-01", epoch).has_value());
  CHECK(format_timestamp(105 * 1440 + 720, epoch) == "2013-12-15 12:00");
  for (sim::Minutes t : {0, 59, 1440, 99'999, 500'000}) {
    CHECK(parse_timestamp(format_timestamp(t, epoch), epoch) == t);
  }
  CHECK(parse_clock("10:00") == 600);
  CHECK(parse_clock("24:00") == 1440);
  CHECK_FALSE(parse_clock("24:01").has_value());
  CHECK(format_clock(1080) == "18:00");
}

TEST_CASE("scenario files: syntax and unknown keys") {
  CHECK_NOTHROW(parse_scenario(tiny_text()));
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[]"), ValidationError);

  auto is = issues_of(replaced(tiny_text(), "\"seed\": 11,", "\"seed\": 11, \"colour\": 1,"));
  CHECK(has_issue(is, "/colour", "unknown key"));
  is = issues_of(replaced(tiny_text(), "\"repos\": [\"fs-1\"]", "\"repos\": [\"fs-1\"], \"chunk\": 5"));
  CHECK(has_issue(is, "/agent/chunk", "unknown key"));
}

TEST_CASE("scenario files: references and ranges") {
  const std::string tiny = tiny_text();
  auto is = issues_of(replaced(tiny, "\"id\": \"fs-1\", \"segment\": \"corp\"", "\"id\": \"fs-1\", \"segment\": \"warehouse\""));
  CHECK(has_issue(is, "/network/hosts/1/segment", "host fs-1 is in unknown segment warehouse"));

  is = issues_of(replaced(tiny, "\"targets\": [\"till\"]", "\"targets\": [\"tll\"]"));
  CHECK(has_issue(is, "/plan/3/targets/0", "tll"));

  is = issues_of(replaced(tiny, "\"drops\": [\"drop-1\"]", "\"drops\": [\"fs-1\"]"));
  CHECK_FALSE(is.empty());

  is = issues_of(replaced(tiny, "\"center\": \"ic\"", "\"center\": \"soc\""));
  CHECK_FALSE(is.empty());

  is = issues_of(replaced(tiny, "\"end\": \"2014-01-09 00:00\"", "\"end\": \"2014-01-05 00:00\""));
  CHECK_FALSE(is.empty());

  is = issues_of(replaced(tiny, "\"key\": \"0001", "\"key\": \"zz01"));
  CHECK_FALSE(is.empty());

  // every problem is reported, not just the first
  is = issues_of(replaced(replaced(tiny, "\"targets\": [\"till\"]", "\"targets\": [\"tll\"]"),
                          "\"drops\": [\"drop-1\"]", "\"drops\": [\"fs-1\"]"));
  CHECK(is.size() >= 2);

  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), std::runtime_error);
}

TEST_CASE("presets") {
  CHECK(preset_names() == std::vector<std::string>{"target-2013", "hardened"});
  CHECK_THROWS_AS(preset("target-2014"), UnknownPreset);

  const ScenarioConfig t = target_2013();
  CHECK_NOTHROW(validate(t));
  CHECK(resolve_hosts(t, "pos").size() == 100);
  CHECK(resolve_hosts(t, "pos-042") == std::vector<sim::HostId>{sim::HostId("pos-042")});
  CHECK(t.segmentation.policy.kind == segmentation::PolicyKind::FlatVlan);
  CHECK_FALSE(t.integrity.enforce);
  CHECK(t.soc.mode == alerts::SocMode::IgnoreAll);
  CHECK(t.agent.agent.obfuscated);
  CHECK(t.agent.agent.encrypted);

  const ScenarioConfig h = hardened();
  CHECK_NOTHROW(validate(h));
  CHECK(h.integrity.enforce);
  CHECK(h.payment.tokenization);
  CHECK(h.segmentation.policy.kind == segmentation::PolicyKind::ZeroTrust);
  CHECK(h.plan.size() == t.plan.size());
}

TEST_CASE("canonical dump round trips; shipped scenario files equal the presets") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    const std::string text = dump_scenario(c);
    CHECK(dump_scenario(parse_scenario(text)) == text);
    CHECK(dump_scenario(load_scenario(std::string(SCENARIO_DIR) + "/" + name + ".json")) == text);
  }
  const std::string tiny = dump_scenario(parse_scenario(tiny_text()));
  CHECK(dump_scenario(parse_scenario(tiny)) == tiny);
}

TEST_CASE("zero-length run") {
  ScenarioConfig c = parse_scenario(tiny_text());
  c.duration = 0;
  c.plan.clear();
  CHECK_NOTHROW(validate(c));
  const Report r = run_scenario(c, 1);
  CHECK(r.records_scraped == 0);
  CHECK(r.records_exfiltrated == 0);
  CHECK(r.alerts_total == 0);
  CHECK(r.flows_attempted == 0);
  CHECK(r.milestones.empty());
  CHECK_FALSE(r.dwell_time.has_value());
  CHECK(r.final_phase == attack::Phase::InitialInfection);
}

TEST_CASE("tiny run: timeline, invariants, report formats") {
  const ScenarioConfig c = parse_scenario(tiny_text());
  const RunOutput out = simulate(c, c.seed);
  const Report& r = out.report;
  check_invariants(c, out);

  CHECK(r.records_scraped > 0);
  CHECK(r.records_exfiltrated > 0);
  CHECK(r.loot_pans == r.records_exfiltrated);
  CHECK(r.final_phase == attack::Phase::Monetization);
  REQUIRE(r.milestone("exfiltration-start").has_value());
  CHECK(r.milestone("exfiltration-start")->time == *parse_timestamp("2014-01-07 10:00", c.epoch));
  CHECK(r.milestone("vendor-compromise")->time == *parse_timestamp("2014-01-06 08:00", c.epoch));
  CHECK_FALSE(r.milestone("external-notification").has_value());

  const std::string text = emit_report(r, "text");
  CHECK(text.find("dwell time") != std::string::npos);
  for (const auto& m : r.milestones) CHECK(text.find(m.name) != std::string::npos);
  const std::string js = emit_report(r, ReportFormat::Json);
  CHECK(js.find("\"records_exfiltrated\"") != std::string::npos);
  CHECK_THROWS_AS(emit_report(r, "xml"), UnsupportedFormat);
  CHECK_THROWS_AS(parse_format("csv"), UnsupportedFormat);

  CHECK(diff_reports(r, r).empty());
  CHECK(emit_report(run_scenario(c, c.seed), "json") == js);
}

TEST_CASE("tiny run: the log alone recomputes the report") {
  const ScenarioConfig c = parse_scenario(tiny_text());
  const RunOutput out = simulate(c, c.seed);
  CHECK(emit_report(compute_report(c, c.seed, out.log), "json") == emit_report(out.report, "json"));
  const auto raised = alerts_from_log(out.log, build_topology(c));
  CHECK(raised.size() == out.report.alerts_total);
}

TEST_CASE("encryption decides what the drops receive in the clear") {
  ScenarioConfig c = parse_scenario(tiny_text());
  c.agent.agent.encrypted = false;
  const Report plain = run_scenario(c, c.seed);
  CHECK(plain.alerts_by_detector.contains("dlp"));
  CHECK(plain.records_exfiltrated > 0);
}

TEST_CASE("hardened preset stops the theft") {
  const ScenarioConfig c = hardened();
  const RunOutput out = simulate(c, c.seed);
  check_invariants(c, out);
  const Report& r = out.report;
  CHECK(r.records_exfiltrated == 0);
  CHECK(r.records_scraped == 0);
  CHECK(r.monitor_records == r.flows_attempted);
  CHECK(r.final_phase == attack::Phase::InitialInfection);
  CHECK_FALSE(r.milestone("pos-malware-installed").has_value());

  const std::string d = diff_reports(run_scenario(parse_scenario(tiny_text()), 11), r);
  CHECK_FALSE(d.empty());
}
