#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "conelab/cli/scenario.hpp"
#include "conelab/error.hpp"

namespace cli = conelab::cli;

namespace {

int run(const std::vector<std::string>& targets, bool all) {
  std::vector<cli::Scenario> scenarios;
  try {
    if (all) scenarios = cli::bundled();
    for (const std::string& t : targets) scenarios.push_back(cli::load_scenario(t));
  } catch (const conelab::Error& e) {
    std::cerr << "conelab: " << e.what() << "\n";
    return 2;
  }
  if (scenarios.empty()) {
    std::cerr << "conelab: nothing to run\n";
    return 2;
  }
  const auto root = cli::output_root();
  bool ok = true;
  for (const cli::Scenario& s : scenarios) {
    const cli::RunReport r = cli::run_scenario(s);
    const auto dir = cli::write_run(r, root);
    for (const cli::Check& c : r.checks)
      std::cout << "  " << cli::to_string(c.status) << "  " << c.name << "  " << c.measured
                << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    std::cout << (r.passed() ? "pass" : "fail") << "  " << s.name << "  -> " << dir.string() << "\n";
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

int report(const std::string& dir, const std::string& csv_path) {
  try {
    const auto reports = cli::collect_reports(dir);
    if (reports.empty()) {
      std::cerr << "conelab: no report.json under " << dir << "\n";
      return 2;
    }
    const cli::Table t = cli::report_table(reports);
    const std::string out = csv_path.empty() ? (std::filesystem::path(dir) / "summary.csv").string() : csv_path;
    std::ofstream(out, std::ios::binary) << t.csv;
    std::cout << t.summary;
    return t.all_pass ? 0 : 1;
  } catch (const conelab::Error& e) {
    std::cerr << "conelab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for conformal deformations of minimal cones", "conelab"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  std::vector<std::string> targets;
  bool all = false;
  auto* run_cmd = app.add_subcommand("run", "Run scenario files or bundled scenario names");
  run_cmd->add_option("scenario", targets, "Scenario JSON file or bundled name");
  run_cmd->add_flag("--all", all, "Run every bundled scenario");

  std::string dir, csv;
  auto* report_cmd = app.add_subcommand("report", "Consolidate the reports under a directory");
  report_cmd->add_option("dir", dir, "Directory holding run outputs")->required();
  report_cmd->add_option("--csv", csv, "Where to write the consolidated CSV (default <dir>/summary.csv)");

  auto* list_cmd = app.add_subcommand("list-scenarios", "List the bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return run(targets, all);
  if (*report_cmd) return report(dir, csv);
  if (*list_cmd) {
    for (const cli::Scenario& s : cli::bundled()) std::cout << s.name << "\t" << s.module << "\t" << s.description << "\n";
    return 0;
  }
  return 2;
}
