#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/newton.hpp"
#include "otreg/ot/pl_potential.hpp"
#include "otreg/ot/target_cloud.hpp"

#include <filesystem>
#include <string>

#include "json.hpp"

namespace otreg::ot {

/// A solved semi-discrete problem, the interchange unit between the solver,
/// the analyses and the command line.
struct Solution {
  ConvexPolygon source;
  ConvexPolygon target;
  TargetCloud cloud;
  DualWeights weights;
  double tol_achieved = 0.0;
  std::size_t iterations = 0;

  /// psi with U1 as its domain.
  PLConvexPotential potential() const;
};

Solution make_solution(const ConvexPolygon& source, const ConvexPolygon& target, const TargetCloud& cloud,
                       const SolveResult& result);

nlohmann::json polygon_to_json(const ConvexPolygon& p);
ConvexPolygon polygon_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);

void write_solution(const std::filesystem::path& path, const Solution& s);
Solution read_solution(const std::filesystem::path& path);

}  // namespace otreg::ot
