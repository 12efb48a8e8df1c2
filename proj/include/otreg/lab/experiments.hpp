#pragma once

#include "otreg/lab/config.hpp"
#include "otreg/ot/newton.hpp"
#include "otreg/ot/target_cloud.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace otreg::lab {

struct SolvedPair {
  ConvexPolygon source, target;
  ot::TargetCloud cloud;
  ot::SolveResult result;
};

/// Builds both domains, samples n target points (seeded Lloyd) and solves.
/// n = 0 means the configured count. Throws SolverError on failure.
SolvedPair solve_pair(const ExperimentConfig& config, std::size_t n = 0, bool verbose = false);

/// Identifies the solve a config asks for: equal keys give equal solutions.
std::string solve_key(const ExperimentConfig& config, std::size_t n = 0);

using SolveProvider = std::function<std::shared_ptr<const SolvedPair>(const ExperimentConfig&, std::size_t n)>;

struct RunOptions {
  /// Defaults to solving afresh on every call.
  SolveProvider provider;
  bool verbose = false;
};

enum class RunStatus { Pass, ThresholdFail, AnalysisFail, SolverFail };

struct ExperimentReport {
  RunStatus status = RunStatus::SolverFail;
  std::map<std::string, double> metrics;
  Json json;  // the full report, also written to result.json
  int exit_code() const;
  bool pass() const { return status == RunStatus::Pass; }
};

/// Solves, runs the named experiment, writes CSVs, SVGs and result.json
/// into out_dir (atomically) and evaluates the configured thresholds.
/// Solver and analysis failures are reported, not thrown.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options = {});

std::string status_name(RunStatus s);

}  // namespace otreg::lab
