#pragma once

#include "otreg/geometry/affine.hpp"
#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/vec.hpp"

#include <vector>

namespace otreg {

/// center + { s * semi_short * e_short + t * semi_long * e_long : s^2 + t^2 <= 1 },
/// with e_short the CCW rotation of e_long.
struct Ellipse {
  Vec2 center{0.0, 0.0};
  double semi_short = 1.0;
  double semi_long = 1.0;
  Vec2 e_long{1.0, 0.0};

  Ellipse() = default;
  /// Throws GeometryError unless 0 < semi_short <= semi_long and e_long is
  /// nonzero (it is normalized).
  Ellipse(const Vec2& center, double semi_short, double semi_long, const Vec2& e_long);

  /// The ellipse {x : (x-c)^T S^{-1} (x-c) <= 1} for symmetric positive
  /// definite S.
  static Ellipse from_shape(const Vec2& center, const Mat2& s);
  static Ellipse circle(const Vec2& center, double radius) {
    return Ellipse(center, radius, radius, Vec2(1.0, 0.0));
  }

  Vec2 e_short() const { return rot90(e_long); }
  double area() const;
  /// Ratio of long to short axis.
  double eccentricity() const { return semi_long / semi_short; }
  /// Same center and axis lengths with the two axis directions exchanged.
  Ellipse perp() const;
  /// S with (x-c)^T S^{-1} (x-c) <= 1 describing the ellipse.
  Mat2 shape() const;
  /// Minkowski gauge about the center: <= 1 exactly on the ellipse.
  double gauge(const Vec2& x) const;
  bool contains(const Vec2& x, double tol = 0.0) const { return gauge(x) <= 1.0 + tol; }
  Ellipse scaled(double k) const { return Ellipse(center, k * semi_short, k * semi_long, e_long); }
  Ellipse transformed(const AffineMap& map) const;
  std::vector<Vec2> boundary_points(std::size_t count) const;
};

/// Second-moment ellipse of the uniform measure on P, scaled to the given
/// area: centered at the centroid with axes along the principal axes of the
/// covariance tensor. Equivariant under unimodular affine maps.
Ellipse fit_ellipse(const ConvexPolygon& p, double target_area);

/// Unimodular map taking E to the centered disk of equal area; its squared
/// operator norm equals eccentricity(E).
AffineMap normalizing_map(const Ellipse& e);

}  // namespace otreg
