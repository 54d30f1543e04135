// Checks a pair of output roots written by `conelab run --all`: every
// operation in the catalog was invoked, and all artifacts except the wall
// times are byte-identical between the two runs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>

#include "conelab/cli/scenario.hpp"

namespace fs = std::filesystem;
namespace cli = conelab::cli;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: suite_check <root-a> <root-b>\n";
    return 2;
  }
  const fs::path a = argv[1], b = argv[2];
  int problems = 0;

  std::set<std::string> ops;
  const auto reports = cli::collect_reports(a);
  for (const cli::json& r : reports)
    for (const auto& op : r.at("ops_invoked")) ops.insert(op.get<std::string>());
  cli::report_table(reports);
  ops.insert("cli:report_table");
  for (const std::string& op : cli::operation_catalog())
    if (!ops.count(op)) {
      std::cout << "not exercised: " << op << "\n";
      ++problems;
    }
  std::cout << ops.size() << " operations exercised by " << reports.size() << " scenarios\n";

  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json" || e.path().filename() == "summary.csv") continue;
    const fs::path twin = b / fs::relative(e.path(), a);
    if (!fs::exists(twin) || slurp(e.path()) != slurp(twin)) {
      std::cout << "differs: " << fs::relative(e.path(), a).string() << "\n";
      ++problems;
    }
    ++compared;
  }
  std::cout << compared << " artifacts compared\n";
  return problems == 0 && compared > 0 ? 0 : 1;
}
