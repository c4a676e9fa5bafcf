// breachsim: run, validate and compare breach scenarios.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "breachsim/scenario/config.hpp"
#include "breachsim/scenario/presets.hpp"
#include "breachsim/scenario/report.hpp"
#include "breachsim/scenario/runner.hpp"

namespace bs = breachsim::scenario;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

// a path, or the name of a built-in preset when no such file exists
bs::ScenarioConfig load(const std::string& what) {
  if (!std::filesystem::exists(what)) {
    const auto names = bs::preset_names();
    if (std::find(names.begin(), names.end(), what) != names.end()) return bs::preset(what);
  }
  return bs::load_scenario(what);
}

void write_out(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int report_invalid(const std::exception& e) {
  std::cerr << e.what() << "\n";
  return kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of a POS memory-scraper breach and its defenses"};
  app.require_subcommand(1);

  std::string scenario, out = "-", format = "json";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run a scenario and write its report");
  run->add_option("--scenario", scenario, "scenario file or preset name")->required();
  run->add_option("--seed", seed, "seed (defaults to the scenario's)");
  run->add_option("--out", out, "report path, - for stdout");
  run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  std::string log_path;
  run->add_option("--log", log_path, "also write the event log, one JSON line per event");

  std::string vpath;
  auto* val = app.add_subcommand("validate", "check a scenario file");
  val->add_option("path", vpath)->required();

  auto* presets = app.add_subcommand("presets", "built-in scenarios");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show = presets->add_subcommand("show", "print a preset as a scenario file");
  show->add_option("name", show_name)->required();

  std::string base, variant;
  auto* cmp = app.add_subcommand("compare", "run two scenarios with one seed and diff their metrics");
  cmp->add_option("--baseline", base)->required();
  cmp->add_option("--variant", variant)->required();
  cmp->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) {
      bs::ScenarioConfig cfg;
      try {
        cfg = load(scenario);
      } catch (const bs::ParseError& e) {
        return report_invalid(e);
      } catch (const bs::ValidationError& e) {
        return report_invalid(e);
      }
      const auto result = bs::simulate(cfg, seed.value_or(cfg.seed));
      if (!log_path.empty()) write_out(log_path, breachsim::sim::serialize_log(result.log));
      write_out(out, bs::emit_report(result.report, format));
    } else if (*val) {
      try {
        const auto cfg = bs::load_scenario(vpath);
        std::cout << cfg.name << ": ok\n";
      } catch (const bs::ParseError& e) {
        return report_invalid(e);
      } catch (const bs::ValidationError& e) {
        return report_invalid(e);
      }
    } else if (*presets) {
      if (presets->got_subcommand("list")) {
        for (const auto& n : bs::preset_names()) std::cout << n << "\n";
      } else {
        try {
          std::cout << bs::dump_scenario(bs::preset(show_name));
        } catch (const bs::UnknownPreset& e) {
          return report_invalid(e);
        }
      }
    } else if (*cmp) {
      bs::ScenarioConfig a, b;
      try {
        a = load(base);
        b = load(variant);
      } catch (const bs::ParseError& e) {
        return report_invalid(e);
      } catch (const bs::ValidationError& e) {
        return report_invalid(e);
      }
      const std::uint64_t s = seed.value_or(a.seed);
      const std::string diff = bs::diff_reports(bs::run_scenario(a, s), bs::run_scenario(b, s));
      std::cout << (diff.empty() ? std::string("no metric differences\n") : diff);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
