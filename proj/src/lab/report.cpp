#include "otreg/lab/report.hpp"

#include "otreg/error.hpp"
#include "otreg/io.hpp"

#include <algorithm>

namespace otreg::lab {

namespace fs = std::filesystem;

AggregateReport aggregate_results(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("report: not a directory: " + dir.string());
  std::vector<fs::path> found;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "result.json") found.push_back(entry.path());
  std::sort(found.begin(), found.end());
  if (found.empty()) throw Error("report: no result.json under " + dir.string());

  AggregateReport out;
  Json runs = Json::array();
  std::size_t passed = 0, solver_failed = 0, failed = 0;
  for (const fs::path& p : found) {
    Json r;
    try {
      r = Json::parse(read_file(p));
    } catch (const Json::exception& e) {
      throw Error("report: " + p.string() + ": " + e.what());
    }
    const std::string status = r.value("status", "missing");
    // A result without an explicit pass is a failure.
    const bool pass = r.value("pass", false) && status == "pass";
    if (pass) ++passed;
    else if (status == "solver_fail") ++solver_failed;
    else ++failed;
    Json failing = Json::array();
    if (r.contains("thresholds"))
      for (const Json& t : r.at("thresholds"))
        if (!t.value("pass", false)) failing.push_back(t);
    Json entry = {{"path", fs::relative(p.parent_path(), dir).generic_string()},
                  {"name", r.value("name", "")},
                  {"experiment", r.value("experiment", "")},
                  {"status", status},
                  {"pass", pass},
                  {"metrics", r.value("metrics", Json::object())},
                  {"failed_thresholds", failing}};
    if (r.contains("error")) entry["error"] = r.at("error");
    runs.push_back(entry);
  }
  out.exit_code = solver_failed ? 3 : (failed ? 2 : 0);
  out.json = {{"runs", runs},
              {"total", found.size()},
              {"passed", passed},
              {"failed", failed},
              {"solver_failed", solver_failed},
              {"pass", out.exit_code == 0},
              {"exit_code", out.exit_code}};
  return out;
}

}  // namespace otreg::lab
