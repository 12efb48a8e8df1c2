#pragma once

#include "otreg/analysis/section.hpp"
#include "otreg/geometry/affine.hpp"
#include "otreg/geometry/ellipse.hpp"
#include "otreg/ot/power_diagram.hpp"

#include <vector>

namespace otreg::analysis {

/// psi seen through the unimodular normalization of one of its sections:
///
///     u(x') = (psi(x) - psi(x0) - g.(x - x0)) / h,   x' = N (x - x0) / sqrt(h),
///
/// with N the linear part of normalizing_map(E_h) and g a subgradient at x0,
/// so that u >= 0, u(0) = 0 and 0 is a gradient of u at 0. The dual v is the
/// Legendre transform of u over the mapped U1, with domain
/// Omega2 = N^{-T}(U2 - g) / sqrt(h).
struct NormalizedPair {
  ot::PLConvexPotential u, v;
  ConvexPolygon omega1, omega2;
  double delta_bar = 0.0;  // largest delta passing both inclusions at every probed height
  Mat2 a_h = Mat2::Identity();  // unimodular, |a_h|^2 = eta(E_h)
  AffineMap map;                // x -> x'
  Vec2 x0, gradient;
  double h = 0.0;
  std::vector<double> probed_heights;
};

struct RenormalizeOptions {
  /// Heights of u at which the inclusions are probed, skipping those below
  /// the cell floor (measured in cells of psi).
  std::vector<double> probe_heights{1.0, 0.5, 0.25, 0.125};
  double floor_cells = 20.0;
  /// Throw unless x0 lies on the boundary of U1 (to 1e-9 diam).
  bool require_boundary = false;
  CentringOptions centring;
};

NormalizedPair renormalize(const ot::PLConvexPotential& psi, const ot::PowerDiagram& diagram,
                           const ConvexPolygon& u2, const Vec2& x0, double h, const Ellipse& e_h,
                           const RenormalizeOptions& options = {});

/// Largest delta with  x_t + delta E_t ⊂ Omega1 ∩ S  and  S ⊂ delta^{-1} E_t
/// (both about the centre of E_t), E_t the ellipse of area pi t fitted to
/// the section S at height t.
double comparability(const ConvexPolygon& section, const ConvexPolygon& omega1, double t);

}  // namespace otreg::analysis
