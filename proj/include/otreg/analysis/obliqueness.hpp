#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/rays.hpp"
#include "otreg/ot/pl_potential.hpp"

#include <vector>

namespace otreg::analysis {

struct ObliquenessResult {
  Vec2 x0;              // base point after snapping
  Vec2 y_ccw, y_cw;     // boundary images matched to the right / left tangent
  double arc = 0.0;     // arc parameter of x0 on the boundary of U1
  Ray l1, r1, l2, r2;   // tangent rays at x0 (U1) and at the images (U2)
  double LdotL = 0.0;
  double RdotR = 0.0;
  double angle_left = 0.0;   // angle between L1 and L2
  double angle_right = 0.0;  // angle between R1 and R2
  double margin = 0.0;       // min(LdotL, RdotR)
  double image_distance = 0.0;  // farthest active slope from the boundary of U2
  bool resolved = true;         // image_distance within tolerance
  bool x_vertex = false, y_vertex_cw = false, y_vertex_ccw = false;
};

struct ObliquenessOptions {
  /// Snap x0 to a vertex of U1 within this many cell sizes, and the images
  /// to a vertex of U2 within this many target spacings.
  double snap_cells = 1.0;
  /// Active slopes farther than this many target spacings from the
  /// boundary of U2 mark the point as under-resolved.
  double image_tol_spacings = 2.0;
  /// Pieces within this fraction of psi.value_scale() of the maximum are
  /// active.
  double active_tol = 1e-10;
};

/// Tangent-ray inner products at x0 on the boundary of U1 and its boundary
/// image. The active slopes at x0 are projected to the boundary of U2;
/// the counter-clockwise-most image is paired with the right tangent and
/// the clockwise-most with the left tangent. psi must carry U1 as domain.
/// Throws AnalysisError if x0 is not on the boundary of U1.
ObliquenessResult obliqueness_check(const ConvexPolygon& u1, const ConvexPolygon& u2,
                                    const ot::PLConvexPotential& psi, const Vec2& x0,
                                    const ObliquenessOptions& options = {});

/// obliqueness_check at `samples` points equally spaced in arc length,
/// starting at vertex 0.
std::vector<ObliquenessResult> obliqueness_scan(const ConvexPolygon& u1, const ConvexPolygon& u2,
                                                const ot::PLConvexPotential& psi, std::size_t samples,
                                                const ObliquenessOptions& options = {});

}  // namespace otreg::analysis
