#include "otreg/analysis/obliqueness.hpp"

#include "otreg/error.hpp"
#include "otreg/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace otreg::analysis {

namespace {

// Boundary location with snapping to a vertex within `snap` (absolute).
BoundaryLocation snap_location(const ConvexPolygon& p, const Vec2& x, double snap) {
  const BoundaryPoint bp = p.project_to_boundary(x);
  std::size_t best = p.size();
  double best_d = snap;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = (p[k] - bp.point).norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best < p.size()) return {true, best, p[best]};
  return {false, bp.edge, bp.point};
}

double arc_of(const ConvexPolygon& p, const BoundaryLocation& loc) {
  double s = 0.0;
  for (std::size_t k = 0; k < loc.index; ++k) s += p.edge(k).norm();
  if (!loc.at_vertex) s += (loc.point - p[loc.index]).norm();
  return s;
}

}  // namespace

ObliquenessResult obliqueness_check(const ConvexPolygon& u1, const ConvexPolygon& u2,
                                    const ot::PLConvexPotential& psi, const Vec2& x0,
                                    const ObliquenessOptions& options) {
  const double cell = psi.cell_size() > 0.0 ? psi.cell_size() : std::sqrt(u1.area() / psi.size());
  if (std::abs(u1.signed_distance(x0)) > 1e-9 * u1.diameter())
    throw AnalysisError("obliqueness_check: base point is not on the boundary of U1");
  const double spacing = std::sqrt(u2.area() / static_cast<double>(psi.size()));

  ObliquenessResult out;
  const BoundaryLocation xl = snap_location(u1, x0, options.snap_cells * cell);
  out.x0 = xl.point;
  out.x_vertex = xl.at_vertex;
  out.arc = arc_of(u1, xl);
  out.l1 = left_tangent(u1, xl);
  out.r1 = right_tangent(u1, xl);

  // Active slopes, projected to the boundary and ordered by arc relative to
  // the first one (the images of one point span far less than a perimeter).
  const std::vector<Vec2> slopes = psi.gradient_set(out.x0, options.active_tol * psi.value_scale());
  const double perimeter = u2.perimeter();
  double ref = -1.0, lo = 0.0, hi = 0.0;
  Vec2 y_lo, y_hi;
  for (const Vec2& y : slopes) {
    const BoundaryPoint bp = u2.project_to_boundary(y);
    out.image_distance = std::max(out.image_distance, bp.distance);
    if (ref < 0.0) {
      ref = bp.arc;
      y_lo = y_hi = bp.point;
      continue;
    }
    double d = bp.arc - ref;
    if (d > 0.5 * perimeter) d -= perimeter;
    if (d < -0.5 * perimeter) d += perimeter;
    if (d < lo) {
      lo = d;
      y_lo = bp.point;
    }
    if (d > hi) {
      hi = d;
      y_hi = bp.point;
    }
  }
  out.resolved = out.image_distance <= options.image_tol_spacings * spacing;

  const BoundaryLocation ccw = snap_location(u2, y_hi, options.snap_cells * spacing);
  const BoundaryLocation cw = snap_location(u2, y_lo, options.snap_cells * spacing);
  out.y_ccw = ccw.point;
  out.y_cw = cw.point;
  out.y_vertex_ccw = ccw.at_vertex;
  out.y_vertex_cw = cw.at_vertex;
  out.r2 = right_tangent(u2, ccw);
  out.l2 = left_tangent(u2, cw);
  out.LdotL = out.l1.direction.dot(out.l2.direction);
  out.RdotR = out.r1.direction.dot(out.r2.direction);
  out.angle_left = angle(out.l1.direction, out.l2.direction);
  out.angle_right = angle(out.r1.direction, out.r2.direction);
  out.margin = std::min(out.LdotL, out.RdotR);
  return out;
}

std::vector<ObliquenessResult> obliqueness_scan(const ConvexPolygon& u1, const ConvexPolygon& u2,
                                                const ot::PLConvexPotential& psi, std::size_t samples,
                                                const ObliquenessOptions& options) {
  std::vector<ObliquenessResult> out(samples);
  const double perimeter = u1.perimeter();
  parallel_for(samples, [&](std::size_t k) {
    const double s = perimeter * static_cast<double>(k) / static_cast<double>(samples);
    out[k] = obliqueness_check(u1, u2, psi, u1.point_at_arc(s).point, options);
    out[k].arc = s;
  });
  return out;
}

}  // namespace otreg::analysis
