#include "conelab/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "conelab/error.hpp"

namespace conelab::cli {

namespace {

bool same_kind(const json& a, const json& b) {
  if (a.is_number_integer() || a.is_number_unsigned()) return b.is_number_integer() || b.is_number_unsigned();
  if (a.is_number()) return b.is_number();
  if (a.is_array()) {
    if (!b.is_array()) return false;
    for (const auto& e : b)
      if (!e.is_number()) return false;
    return true;
  }
  return a.type() == b.type();
}

std::string text_field(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    require(!required, ErrorCode::Config, std::string("scenario is missing \"") + key + "\"");
    return {};
  }
  require(j.at(key).is_string(), ErrorCode::Config, std::string("\"") + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
  }
  return "skip";
}

Scenario parse_scenario(const json& j) {
  require(j.is_object(), ErrorCode::Config, "scenario must be a JSON object");
  static const std::set<std::string> keys{"schema", "name", "module", "description", "seed", "parameters", "output"};
  for (const auto& [k, v] : j.items()) require(keys.count(k) > 0, ErrorCode::Config, "unknown scenario key \"" + k + "\"");
  require(text_field(j, "schema", true) == kSchema, ErrorCode::Config, std::string("schema must be \"") + kSchema + "\"");
  Scenario s;
  s.name = text_field(j, "name", true);
  require(!s.name.empty() && s.name.find_first_of("/\\") == std::string::npos, ErrorCode::Config,
          "name must be non-empty and free of path separators");
  s.module = text_field(j, "module", true);
  s.description = text_field(j, "description", false);
  s.output = text_field(j, "output", false);
  if (s.output.empty()) s.output = s.name;
  require(s.output.find("..") == std::string::npos && s.output.front() != '/', ErrorCode::Config,
          "output must be a relative path inside the output root");
  require(j.contains("seed"), ErrorCode::Config, "scenario is missing \"seed\"");
  require(j.at("seed").is_number_unsigned() || (j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0),
          ErrorCode::Config, "seed must be a nonnegative integer");
  s.seed = j.at("seed").get<std::uint64_t>();

  s.parameters = module_defaults(s.module);
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    require(p.is_object(), ErrorCode::Config, "parameters must be an object");
    for (const auto& [k, v] : p.items()) {
      require(s.parameters.contains(k), ErrorCode::Config, "unknown parameter \"" + k + "\" for module " + s.module);
      require(same_kind(s.parameters[k], v), ErrorCode::Config, "parameter \"" + k + "\" has the wrong type");
      s.parameters[k] = v;
    }
  }
  validate_parameters(s.module, s.parameters);
  return s;
}

Scenario load_scenario(const std::string& path_or_name) {
  std::ifstream in(path_or_name);
  if (!in) {
    for (const Scenario& s : bundled())
      if (s.name == path_or_name) return s;
    fail(ErrorCode::Config, "no scenario file or bundled scenario named \"" + path_or_name + "\"");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

bool RunReport::passed() const {
  for (const Check& c : checks)
    if (c.status == Status::Fail) return false;
  return true;
}

void Context::push(Check c) {
  auto now = std::chrono::steady_clock::now();
  c.wall_time = std::chrono::duration<double>(now - last_).count();
  last_ = now;
  report_.checks.push_back(std::move(c));
}

void Context::near(const std::string& name, double measured, double expected, double tol, std::string detail) {
  const bool ok = std::abs(measured - expected) <= tol;
  push({name, ok ? Status::Pass : Status::Fail, measured, expected, tol, "abs", std::move(detail)});
}

void Context::at_most(const std::string& name, double measured, double bound, std::string detail) {
  push({name, measured <= bound ? Status::Pass : Status::Fail, measured, bound, 0.0, "le", std::move(detail)});
}

void Context::at_least(const std::string& name, double measured, double bound, std::string detail) {
  push({name, measured >= bound ? Status::Pass : Status::Fail, measured, bound, 0.0, "ge", std::move(detail)});
}

void Context::above(const std::string& name, double measured, double bound, std::string detail) {
  push({name, measured > bound ? Status::Pass : Status::Fail, measured, bound, 0.0, "gt", std::move(detail)});
}

void Context::within(const std::string& name, double measured, double lo, double hi, std::string detail) {
  const bool ok = lo <= measured && measured <= hi;
  push({name, ok ? Status::Pass : Status::Fail, measured, 0.5 * (lo + hi), 0.5 * (hi - lo), "in", std::move(detail)});
}

void Context::truth(const std::string& name, bool ok, std::string detail) {
  push({name, ok ? Status::Pass : Status::Fail, ok ? 1.0 : 0.0, 1.0, 0.0, "true", std::move(detail)});
}

void Context::fail(const std::string& name, std::string detail) {
  push({name, Status::Fail, 0.0, 0.0, 0.0, "true", std::move(detail)});
}

void Context::artifact(std::string filename, std::string content) {
  report_.artifacts.push_back({std::move(filename), std::move(content)});
}

json report_json(const RunReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"measured", c.measured},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance},
                      {"relation", c.relation},
                      {"detail", c.detail}});
  }
  json artifacts = json::array();
  for (const Artifact& a : r.artifacts) artifacts.push_back(a.filename);
  std::string status = r.checks.empty() ? "skip" : (r.passed() ? "pass" : "fail");
  return {{"schema", "conelab-report/1"},
          {"scenario", r.scenario.name},
          {"module", r.scenario.module},
          {"environment", {{"version", kVersion}, {"seed", r.scenario.seed}}},
          {"parameters", r.scenario.parameters},
          {"status", status},
          {"checks", checks},
          {"ops_invoked", std::vector<std::string>(r.ops.begin(), r.ops.end())},
          {"artifacts", artifacts}};
}

json timing_json(const RunReport& r) {
  json out = json::object();
  for (const Check& c : r.checks) out[c.name] = c.wall_time;
  return out;
}

std::filesystem::path output_root() {
  const char* env = std::getenv("CONELAB_OUTPUT_ROOT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("conelab-out");
}

std::filesystem::path write_run(const RunReport& r, const std::filesystem::path& root) {
  const std::filesystem::path dir = root / r.scenario.output;
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Config, "cannot write " + (dir / name).string());
    out << content;
  };
  put("report.json", report_json(r).dump(2) + "\n");
  put("timing.json", timing_json(r).dump(2) + "\n");
  for (const Artifact& a : r.artifacts) put(a.filename, a.content);
  return dir;
}

}  // namespace conelab::cli
