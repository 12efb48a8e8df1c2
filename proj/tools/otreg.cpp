// Command-line front end: solve, run and report.

#include "otreg/error.hpp"
#include "otreg/io.hpp"
#include "otreg/lab/config.hpp"
#include "otreg/lab/experiments.hpp"
#include "otreg/lab/report.hpp"
#include "otreg/ot/solution_io.hpp"
#include "otreg/parallel.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace otreg;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool verbose = false;
};

lab::ExperimentConfig load(const fs::path& path, const Globals& g) {
  lab::ExperimentConfig c = lab::load_config(path);
  if (g.seed) {
    c.seed = *g.seed;
    c.raw["seed"] = *g.seed;
  }
  return c;
}

int cmd_solve(const fs::path& config_path, const fs::path& out, const Globals& g) {
  const lab::ExperimentConfig c = load(config_path, g);
  std::optional<lab::SolvedPair> solved;
  try {
    solved.emplace(lab::solve_pair(c, 0, g.verbose));
  } catch (const SolverError& e) {
    std::cerr << "otreg: solve failed: " << e.what() << "\n";
    return 3;
  }
  const lab::SolvedPair& pair = *solved;
  ot::write_solution(out, ot::make_solution(pair.source, pair.target, pair.cloud, pair.result));
  if (g.verbose)
    std::cerr << "solved n=" << pair.cloud.size() << " in " << pair.result.iterations
              << " Newton steps, residual " << pair.result.tol_achieved << " * area\n";
  return 0;
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir, const Globals& g) {
  const lab::ExperimentConfig c = load(config_path, g);
  fs::create_directories(out_dir);
  lab::RunOptions opts;
  opts.verbose = g.verbose;
  const lab::ExperimentReport r = lab::run_experiment(c, out_dir, opts);
  std::cout << c.name << ": " << lab::status_name(r.status) << "\n";
  for (const lab::Json& t : r.json.at("thresholds"))
    if (!t.at("pass").get<bool>())
      std::cout << "  failed: " << t.at("metric").get<std::string>() << " " << t.at("op").get<std::string>() << " "
                << t.at("value").dump() << " (actual " << t.at("actual").dump() << ")\n";
  if (r.json.contains("error")) std::cout << "  error: " << r.json.at("error").get<std::string>() << "\n";
  return r.exit_code();
}

int cmd_report(const fs::path& dir, const fs::path& out, const Globals& g) {
  const lab::AggregateReport a = lab::aggregate_results(dir);
  write_file_atomic(out, a.json.dump(2) + "\n");
  if (g.verbose)
    std::cerr << a.json.at("passed").get<std::size_t>() << "/" << a.json.at("total").get<std::size_t>()
              << " runs passed\n";
  return a.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"otreg: planar optimal transport regularity lab"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", g.verbose, "Progress on stderr");

  fs::path config, out, out_dir, dir;
  auto* solve = app.add_subcommand("solve", "Solve the transport problem of a config");
  solve->add_option("--config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Solution JSON")->required();
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Output directory")->required();
  auto* report = app.add_subcommand("report", "Aggregate run results");
  report->add_option("--dir", dir, "Directory of runs")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out, "Report JSON")->required();
  // Global flags are accepted after the subcommand too.
  app.fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;
  set_thread_count(g.threads);

  try {
    if (*solve) return cmd_solve(config, out, g);
    if (*run) return cmd_run(config, out_dir, g);
    return cmd_report(dir, out, g);
  } catch (const ConfigError& e) {
    std::cerr << "otreg: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "otreg: " << e.what() << "\n";
    return 1;
  }
}
