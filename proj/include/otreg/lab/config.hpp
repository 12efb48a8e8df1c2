#pragma once

#include "otreg/geometry/polygon.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace otreg::lab {

using Json = nlohmann::json;

/// The nine experiment names.
const std::vector<std::string>& experiment_names();

struct SolverConfig {
  std::size_t n_targets = 0;
  double tol = 1e-8;  // max cell-mass residual relative to area(U1)
  std::size_t max_iter = 100;
  std::size_t lloyd_iterations = 30;
};

struct Threshold {
  std::string metric;
  std::string op;  // "<=", "<", ">=", ">"
  double value = 0.0;

  bool holds(double actual) const;
};

struct ExperimentConfig {
  std::string name;
  std::string experiment;
  std::uint64_t seed = 0;
  Json source;  // domain specs, validated
  Json target;
  SolverConfig solver;
  Json params = Json::object();
  std::vector<Threshold> thresholds;
  Json raw;  // the input document, echoed into reports
};

/// Validates against the published schema (configs/schema.json) and the
/// semantic rules it cannot express; throws ConfigError naming the field.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds a domain from its spec. `source` resolves {"generator": "source"}
/// in target specs.
ConvexPolygon build_domain(const Json& spec, const ConvexPolygon* source = nullptr);

/// Typed parameter lookup with a default; throws ConfigError on a type
/// mismatch.
double param_number(const Json& params, const std::string& key, double fallback);
std::size_t param_count(const Json& params, const std::string& key, std::size_t fallback);
std::string param_string(const Json& params, const std::string& key, const std::string& fallback);
std::vector<double> param_numbers(const Json& params, const std::string& key, const std::vector<double>& fallback);

}  // namespace otreg::lab
