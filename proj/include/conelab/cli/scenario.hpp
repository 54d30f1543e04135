#pragma once

// Scenario files, run reports and the dispatch context shared by the runners.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

namespace conelab::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "conelab-scenario/1";
inline constexpr const char* kVersion = "conelab 0.1.0";

struct Scenario {
  std::string name;
  std::string module;
  std::string description;
  std::string output;  // subdirectory of the output root
  std::uint64_t seed = 0;
  json parameters = json::object();  // filled with defaults after validation
};

// Validates the schema and the module parameters; throws Error(Config).
Scenario parse_scenario(const json& j);
// Reads a scenario file, or a bundled scenario when no such file exists.
Scenario load_scenario(const std::string& path_or_name);

enum class Status { Pass, Fail, Skip };
const char* to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::Skip;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "abs", "le", "ge", "gt", "in", "true"
  std::string detail;
  double wall_time = 0.0;
};

struct Artifact {
  std::string filename;
  std::string content;
};

struct RunReport {
  Scenario scenario;
  std::vector<Check> checks;
  std::set<std::string> ops;  // "module:op" entries touched by the run
  std::vector<Artifact> artifacts;
  bool passed() const;
};

class Context {
 public:
  explicit Context(RunReport& report) : report_(report) {}

  void op(const std::string& module, const std::string& name) { report_.ops.insert(module + ":" + name); }
  const json& params() const { return report_.scenario.parameters; }
  std::uint64_t seed() const { return report_.scenario.seed; }

  void near(const std::string& name, double measured, double expected, double tol, std::string detail = {});
  void at_most(const std::string& name, double measured, double bound, std::string detail = {});
  void at_least(const std::string& name, double measured, double bound, std::string detail = {});
  void above(const std::string& name, double measured, double bound, std::string detail = {});
  void within(const std::string& name, double measured, double lo, double hi, std::string detail = {});
  void truth(const std::string& name, bool ok, std::string detail = {});
  void fail(const std::string& name, std::string detail);

  void artifact(std::string filename, std::string content);

 private:
  void push(Check c);
  RunReport& report_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

RunReport run_scenario(const Scenario& s);

json report_json(const RunReport& r);
json timing_json(const RunReport& r);

// Output root: $CONELAB_OUTPUT_ROOT or ./conelab-out.
std::filesystem::path output_root();
std::filesystem::path write_run(const RunReport& r, const std::filesystem::path& root);

struct Table {
  std::string csv;
  std::string summary;
  bool all_pass = true;
};

std::vector<json> collect_reports(const std::filesystem::path& dir);
Table report_table(const std::vector<json>& reports);

const std::vector<Scenario>& bundled();
// Every operation the scenario suite is expected to exercise.
const std::vector<std::string>& operation_catalog();
// Parameter defaults for a module; unknown modules give a config error.
json module_defaults(const std::string& module);
// Range checks mirroring the module preconditions; throws Error(Config).
void validate_parameters(const std::string& module, const json& params);

}  // namespace conelab::cli
