#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/vec.hpp"

namespace otreg {

struct Ray {
  Vec2 origin{0.0, 0.0};
  Vec2 direction{1.0, 0.0};  // unit
};

/// Angle in [0, pi] between two nonzero vectors. Throws GeometryError on a
/// zero vector.
double angle(const Vec2& v1, const Vec2& v2);

/// Open cone {apex + s v : s > 0, angle(v, direction) < opening}.
class Cone {
 public:
  Cone(const Vec2& apex, const Vec2& direction, double opening);

  const Vec2& apex() const { return apex_; }
  const Vec2& direction() const { return direction_; }
  double opening() const { return opening_; }
  bool contains(const Vec2& x) const;

 private:
  Vec2 apex_;
  Vec2 direction_;
  double opening_;
};

/// Where a boundary query landed after snapping.
struct BoundaryLocation {
  bool at_vertex = false;
  std::size_t index = 0;  // vertex index, or edge index when !at_vertex
  Vec2 point;
};

/// Locate x0 on the boundary of P. Points within snap_rel * diam of a vertex
/// snap to it; throws GeometryError if x0 is farther than on_rel * diam from
/// the boundary.
BoundaryLocation locate_on_boundary(const ConvexPolygon& p, const Vec2& x0, double snap_rel = 1e-9,
                                    double on_rel = 1e-9);

/// Tangent rays with the boundary traversed CCW: the right tangent follows
/// the traversal forward, the left tangent points backward. On an edge they
/// are the two directions of its line; at a vertex they are the incident
/// edges pointing away from it.
Ray left_tangent(const ConvexPolygon& p, const Vec2& x0, double snap_rel = 1e-9, double on_rel = 1e-9);
Ray right_tangent(const ConvexPolygon& p, const Vec2& x0, double snap_rel = 1e-9, double on_rel = 1e-9);

Ray left_tangent(const ConvexPolygon& p, const BoundaryLocation& loc);
Ray right_tangent(const ConvexPolygon& p, const BoundaryLocation& loc);

}  // namespace otreg
