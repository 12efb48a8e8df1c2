#include "otreg/geometry/rays.hpp"

#include "otreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace otreg {

double angle(const Vec2& v1, const Vec2& v2) {
  const double n1 = v1.norm(), n2 = v2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw GeometryError("angle of a zero vector");
  // atan2 of cross and dot is accurate near 0 and pi where acos is not.
  return std::atan2(std::abs(cross(v1, v2)), v1.dot(v2));
}

Cone::Cone(const Vec2& apex, const Vec2& direction, double opening)
    : apex_(apex), opening_(opening) {
  if (!(direction.norm() > 0.0)) throw GeometryError("cone direction is zero");
  if (!(opening >= 0.0 && opening <= std::numbers::pi)) throw GeometryError("cone opening outside [0, pi]");
  direction_ = direction.normalized();
}

bool Cone::contains(const Vec2& x) const {
  const Vec2 d = x - apex_;
  if (d.x() == 0.0 && d.y() == 0.0) return false;
  return angle(d, direction_) < opening_;
}

BoundaryLocation locate_on_boundary(const ConvexPolygon& p, const Vec2& x0, double snap_rel, double on_rel) {
  const double diam = p.diameter();
  const BoundaryPoint bp = p.project_to_boundary(x0);
  if (bp.distance > on_rel * diam) throw GeometryError("point is not on the polygon boundary");
  const std::size_t n = p.size();
  for (std::size_t k = 0; k < n; ++k)
    if ((p[k] - x0).norm() <= snap_rel * diam) return {true, k, p[k]};
  return {false, bp.edge, bp.point};
}

Ray right_tangent(const ConvexPolygon& p, const BoundaryLocation& loc) {
  const std::size_t k = loc.index;
  return {loc.point, p.edge(k).normalized()};
}

Ray left_tangent(const ConvexPolygon& p, const BoundaryLocation& loc) {
  const std::size_t n = p.size();
  const std::size_t incoming = loc.at_vertex ? (loc.index + n - 1) % n : loc.index;
  return {loc.point, -p.edge(incoming).normalized()};
}

Ray left_tangent(const ConvexPolygon& p, const Vec2& x0, double snap_rel, double on_rel) {
  return left_tangent(p, locate_on_boundary(p, x0, snap_rel, on_rel));
}

Ray right_tangent(const ConvexPolygon& p, const Vec2& x0, double snap_rel, double on_rel) {
  return right_tangent(p, locate_on_boundary(p, x0, snap_rel, on_rel));
}

}  // namespace otreg
