#include <algorithm>
#include <fstream>
#include <sstream>

#include "conelab/cli/scenario.hpp"
#include "conelab/error.hpp"
#include "conelab/serialize.hpp"

namespace conelab::cli {

namespace fs = std::filesystem;

std::vector<json> collect_reports(const fs::path& dir) {
  require(fs::is_directory(dir), ErrorCode::Config, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "report.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<json> out;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(json::parse(in));
    } catch (const json::exception& e) {
      fail(ErrorCode::Config, f.string() + " is not valid JSON: " + e.what());
    }
  }
  return out;
}

namespace {

std::string cell(const json& v) {
  if (v.is_number()) return io::format_number(v.get<double>());
  if (v.is_null()) return "nan";
  return v.get<std::string>();
}

}  // namespace

Table report_table(const std::vector<json>& reports) {
  Table t;
  io::Csv csv({"scenario", "check", "status", "measured", "expected", "tolerance", "relation"});
  std::ostringstream summary;
  int pass = 0, fail_count = 0, skip = 0;
  for (const json& r : reports) {
    const std::string name = r.value("scenario", std::string("?"));
    const json checks = r.value("checks", json::array());
    int failed = 0;
    for (const json& c : checks) {
      const std::string status = c.at("status");
      failed += status == "fail";
      csv.add_text({name, c.at("name").get<std::string>(), status, cell(c.at("measured")), cell(c.at("expected")),
                    cell(c.at("tolerance")), c.at("relation").get<std::string>()});
    }
    std::string verdict = checks.empty() ? "skip" : (failed ? "fail" : "pass");
    if (verdict == "skip") ++skip;
    else if (verdict == "fail") ++fail_count;
    else ++pass;
    t.all_pass = t.all_pass && verdict != "fail";
    summary << verdict << "  " << name << "  (" << checks.size() << " checks";
    if (failed) summary << ", " << failed << " failed";
    summary << ")\n";
  }
  summary << pass << " passed, " << fail_count << " failed, " << skip << " skipped\n";
  t.csv = csv.str();
  t.summary = summary.str();
  return t;
}

}  // namespace conelab::cli
