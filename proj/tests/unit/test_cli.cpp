#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "conelab/cli/scenario.hpp"
#include "conelab/error.hpp"

using namespace conelab;
using cli::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
  return {{"schema", cli::kSchema}, {"name", "t"}, {"module", "dimshift"}, {"seed", 1}, {"parameters", json::object()}};
}

ErrorCode code_of(const json& j) {
  try {
    cli::parse_scenario(j);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("scenario accepted");
  return ErrorCode::Domain;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("conelab-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("scenario schema validation") {
  const cli::Scenario s = cli::parse_scenario(minimal());
  CHECK(s.parameters == cli::module_defaults("dimshift"));
  CHECK(s.output == "t");

  json j = minimal();
  j.erase("seed");
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["schema"] = "conelab-scenario/0";
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["module"] = "nope";
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["parameters"]["nonsense"] = 1;
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["parameters"]["n_min"] = "five";
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["parameters"]["n_min"] = 2;
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["output"] = "../escape";
  CHECK(code_of(j) == ErrorCode::Config);
  j = minimal();
  j["extra"] = true;
  CHECK(code_of(j) == ErrorCode::Config);
}

TEST_CASE("bundled scenarios match the shipped files") {
  std::set<std::string> files;
  for (const auto& e : fs::directory_iterator(fs::path(CONELAB_SOURCE_DIR) / "scenarios")) {
    std::ifstream in(e.path());
    const cli::Scenario s = cli::parse_scenario(json::parse(in));
    CHECK(e.path().stem().string() == s.name);
    files.insert(s.name);
  }
  std::set<std::string> names;
  for (const cli::Scenario& s : cli::bundled()) names.insert(s.name);
  CHECK(files == names);
  CHECK(names.count("lambda0-simons") == 1);
  CHECK(names.count("theta-scaling") == 1);
  CHECK(cli::load_scenario("theta-scaling").module == "theta");
  CHECK_THROWS_AS(cli::load_scenario("no-such-scenario"), Error);
}

TEST_CASE("runs are deterministic and reports are byte-identical") {
  const cli::Scenario s = cli::load_scenario("dimshift-table");
  const cli::RunReport a = cli::run_scenario(s), b = cli::run_scenario(s);
  CHECK(a.passed());
  CHECK(cli::report_json(a).dump(2) == cli::report_json(b).dump(2));
  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) CHECK(a.artifacts[i].content == b.artifacts[i].content);
  CHECK(a.ops.count("barrier:dimshift_scal_sign") == 1);

  const fs::path root = fresh_dir("determinism");
  const fs::path dir = cli::write_run(a, root);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "timing.json"));
  CHECK(fs::exists(dir / "dimshift.csv"));
  const cli::Table t1 = cli::report_table(cli::collect_reports(root));
  cli::write_run(b, root);
  const cli::Table t2 = cli::report_table(cli::collect_reports(root));
  CHECK(t1.csv == t2.csv);
  CHECK(t1.all_pass);
  fs::remove_all(root);
}

TEST_CASE("module errors become failing checks") {
  cli::Scenario s = cli::load_scenario("perron-simons");
  s.parameters["r_in"] = 0.999;  // grid too coarse for the admissibility test
  s.parameters["nodes_per_unit"] = 10.0;
  s.parameters["lambda_fraction"] = 0.999999;
  const cli::RunReport r = cli::run_scenario(s);
  CHECK_FALSE(r.passed());
}

TEST_CASE("report table marks empty reports as skipped and propagates failures") {
  json pass = {{"scenario", "a"},
               {"checks", json::array({{{"name", "x"}, {"status", "pass"}, {"measured", 1.0}, {"expected", 1.0},
                                         {"tolerance", 0.0}, {"relation", "abs"}}})}};
  json empty = {{"scenario", "b"}, {"checks", json::array()}};
  cli::Table t = cli::report_table({pass, empty});
  CHECK(t.all_pass);
  CHECK(t.summary.find("skip  b") != std::string::npos);
  json bad = pass;
  bad["scenario"] = "c";
  bad["checks"][0]["status"] = "fail";
  t = cli::report_table({pass, bad});
  CHECK_FALSE(t.all_pass);
  CHECK(t.csv.find("c,x,fail") != std::string::npos);
}

TEST_CASE("operation catalog names every module operation once") {
  const auto& ops = cli::operation_catalog();
  std::set<std::string> unique(ops.begin(), ops.end());
  CHECK(unique.size() == ops.size());
  CHECK(ops.size() == 43);
}

TEST_CASE("output root honours the environment") {
  setenv("CONELAB_OUTPUT_ROOT", "/tmp/conelab-root-test", 1);
  CHECK(cli::output_root() == fs::path("/tmp/conelab-root-test"));
  unsetenv("CONELAB_OUTPUT_ROOT");
  CHECK(cli::output_root() == fs::path("conelab-out"));
}
