// rbk: run scenarios, sweep the shipped set, or check the acceptance criteria.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rbk/acceptance.hpp"
#include "rbk/error.hpp"
#include "rbk/runner.hpp"
#include "rbk/scenario.hpp"

namespace fs = std::filesystem;

namespace {

void print_summary(const rbk::Scenario& s, const rbk::RunResult& r) {
  fmt::print("{}: vol_from_dims={} three_way_agreement={} ({} files)\n", s.id, rbk::volume_string(r.report.vol_from_dims),
             r.report.three_way_agreement ? "true" : "false", r.written.size());
}

int run_one(const fs::path& json, const fs::path& out) {
  const rbk::Scenario s = rbk::load_scenario(json);
  print_summary(s, rbk::run_scenario(s, out));
  return 0;
}

int sweep(const fs::path& dir, const fs::path& out) {
  rbk::prepare_out_dir(out);
  const auto files = rbk::scenario_files(dir);
  if (files.empty()) throw rbk::Error(rbk::ErrorCode::Io, "no scenarios in " + dir.string());
  for (const auto& f : files) {
    const rbk::Scenario s = rbk::load_scenario(f);
    print_summary(s, rbk::run_scenario(s, out / s.id));
  }
  return 0;
}

int check(const fs::path& dir, int only) {
  bool all = true;
  for (int id = 1; id <= rbk::kCriterionCount; ++id) {
    if (only != 0 && id != only) continue;
    const rbk::CriterionResult r = rbk::run_criterion(id, dir);
    fmt::print("{}\n", rbk::format_result(r));
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted Bergman kernel lab"};
  app.require_subcommand(1);

  std::string json, out, scenarios = RBK_SCENARIO_DIR;
  bool all = false;
  int criterion = 0;

  auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
  run->add_option("scenario", json, "Scenario JSON file")->required();
  run->add_option("--out", out, "Output directory")->required();

  auto* sw = app.add_subcommand("sweep", "Run every shipped scenario");
  sw->add_flag("--all", all, "Run all scenarios in the scenario directory")->required();
  sw->add_option("--out", out, "Output directory (one subdirectory per scenario)")->required();
  sw->add_option("--scenarios", scenarios, "Scenario directory");

  auto* ck = app.add_subcommand("check", "Run the acceptance criteria");
  ck->add_option("--scenarios", scenarios, "Scenario directory");
  ck->add_option("--criterion", criterion, "Run a single criterion")->check(CLI::Range(1, rbk::kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error USAGE: " << e.what() << "\n";
    return 3;
  }

  try {
    if (*run) return run_one(json, out);
    if (*sw) return sweep(scenarios, out);
    return check(scenarios, criterion);
  } catch (const rbk::Error& e) {
    std::cerr << "error " << e.what() << "\n";
    return rbk::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error INTERNAL: " << e.what() << "\n";
    return 1;
  }
}
