#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"
#include "otreg/ot/power_diagram.hpp"
#include "otreg/ot/target_cloud.hpp"

#include <vector>

namespace otreg::ot {

/// Kantorovich dual variables, gauge-fixed to sum zero.
struct DualWeights {
  std::vector<double> w;
};

struct SolverOptions {
  double tol = 1e-7;             // relative to area(U1)
  std::size_t max_iter = 100;
  double damping = 0.5;          // step factor on a rejected trial
  std::size_t max_halvings = 40;
  double max_eccentricity = 1e6; // needle-like domains are rejected
  bool verbose = false;
};

struct SolveResult {
  DualWeights weights;
  PLConvexPotential potential;
  PowerDiagram diagram;
  std::size_t iterations = 0;
  double max_residual = 0.0;   // max_i |area(cell_i) - mass_i|
  double tol_achieved = 0.0;   // max_residual / area(U1)
  std::vector<double> residual_history;      // l2 norm per accepted iterate
  std::vector<double> max_residual_history;  // sup norm per accepted iterate
  bool scaled_start = false;   // Voronoi start had empty cells
};

/// Semi-discrete transport from the uniform measure on U1 to the cloud,
/// cost |x-y|^2/2, by damped Newton on the dual weights.
///
/// The Jacobian of the cell areas is the graph Laplacian of the diagram
/// with off-diagonal entries -length/(2 distance). A trial step is halved
/// until the smallest cell keeps at least half of min(initial smallest
/// cell, smallest mass) and the l2 residual drops by the factor (1 - step/2).
///
/// Throws SolverError: InvalidInput (bad masses, duplicate points, needle
/// domain), Disconnected (initial diagram), NonConvergence.
SolveResult newton_solve(const ConvexPolygon& u1, const TargetCloud& cloud, const SolverOptions& options = {});

}  // namespace otreg::ot
