#pragma once

#include "otreg/geometry/vec.hpp"

#include <optional>
#include <span>
#include <vector>

namespace otreg {

class AffineMap;

/// Relative tolerance (times the diameter) of geometric predicates.
inline constexpr double kGeomRelTol = 1e-10;

/// Signed area (positive for CCW) of a closed vertex loop.
double polygon_signed_area(std::span<const Vec2> v);
Vec2 polygon_centroid(std::span<const Vec2> v);

/// A point on the boundary of a polygon, with the edge it lies on.
struct BoundaryPoint {
  Vec2 point;
  std::size_t edge = 0;  // edge k runs from vertex k to vertex k+1
  double t = 0.0;        // position along the edge in [0, 1]
  double arc = 0.0;      // arc length from vertex 0, CCW
  double distance = 0.0; // distance from the query point
};

/// Bounded convex polygon, vertices stored counter-clockwise.
///
/// Construction canonicalizes the input: orientation is made CCW, repeated
/// vertices are dropped and collinear runs are merged (cross product below
/// 1e-12 diam^2). Throws GeometryError on fewer than three remaining
/// vertices, zero area or a reflex vertex.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  /// Same canonicalization, but returns nullopt for degenerate input.
  static std::optional<ConvexPolygon> try_make(std::vector<Vec2> vertices);

  /// Convex hull of an arbitrary point set (monotone chain).
  static ConvexPolygon hull(std::vector<Vec2> points);

  static ConvexPolygon box(const Vec2& lo, const Vec2& hi);

  const std::vector<Vec2>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Vec2& operator[](std::size_t k) const { return v_[k]; }
  const Vec2& vertex(std::size_t k) const { return v_[k % v_.size()]; }
  Vec2 edge(std::size_t k) const { return vertex(k + 1) - v_[k]; }

  double area() const { return area_; }
  double diameter() const { return diam_; }
  double perimeter() const;
  Vec2 centroid() const;
  /// Covariance tensor of the uniform probability measure on the polygon.
  Mat2 covariance() const;
  std::pair<Vec2, Vec2> bbox() const;

  /// Closed containment with tolerance tol_rel * diameter.
  bool contains(const Vec2& x, double tol_rel = kGeomRelTol) const;
  bool contains(const ConvexPolygon& other, double tol_rel = kGeomRelTol) const;
  /// Negative inside, positive outside; magnitude is Euclidean distance to
  /// the boundary.
  double signed_distance(const Vec2& x) const;
  BoundaryPoint project_to_boundary(const Vec2& x) const;
  /// Boundary point at CCW arc length s (taken modulo the perimeter).
  BoundaryPoint point_at_arc(double s) const;

  ConvexPolygon transformed(const AffineMap& map) const;
  ConvexPolygon translated(const Vec2& shift) const;
  /// Dilation by factor k about center c.
  ConvexPolygon dilated(const Vec2& c, double k) const;

 private:
  struct Validated {};
  ConvexPolygon(Validated, std::vector<Vec2> v);

  std::vector<Vec2> v_;
  double area_ = 0.0;
  double diam_ = 0.0;
};

/// Clip a raw CCW loop against {x : n.x <= c}. Points within eps of the
/// line are kept. Output may have fewer than three vertices.
void clip_halfplane_raw(std::span<const Vec2> in, const Vec2& n, double c, double eps,
                        std::vector<Vec2>& out);

/// P intersected with the half-plane {x : n.x <= c}; nullopt when empty or
/// degenerate.
std::optional<ConvexPolygon> clip_halfplane(const ConvexPolygon& p, const Vec2& n, double c);

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Radius and center of the largest disk inside the polygon.
struct InscribedDisk {
  Vec2 center;
  double radius = 0.0;
};
InscribedDisk largest_inscribed_disk(const ConvexPolygon& p);

}  // namespace otreg
