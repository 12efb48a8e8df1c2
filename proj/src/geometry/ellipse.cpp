#include "otreg/geometry/ellipse.hpp"

#include "otreg/error.hpp"

#include <cmath>
#include <numbers>

namespace otreg {

namespace {

Vec2 canonical_direction(Vec2 e) {
  e.normalize();
  if (e.x() < 0.0 || (e.x() == 0.0 && e.y() < 0.0)) e = -e;
  return e;
}

}  // namespace

Ellipse::Ellipse(const Vec2& c, double ss, double sl, const Vec2& el)
    : center(c), semi_short(ss), semi_long(sl) {
  if (!(ss > 0.0) || !(sl >= ss) || !std::isfinite(sl))
    throw GeometryError("ellipse requires 0 < semi_short <= semi_long");
  if (!(el.norm() > 0.0)) throw GeometryError("ellipse axis direction is zero");
  e_long = canonical_direction(el);
}

Ellipse Ellipse::from_shape(const Vec2& c, const Mat2& s) {
  const SymEigen2 eig = sym_eig2(s);
  if (!(eig.small > 0.0)) throw GeometryError("ellipse shape matrix is not positive definite");
  return Ellipse(c, std::sqrt(eig.small), std::sqrt(eig.large), eig.e_large);
}

double Ellipse::area() const { return std::numbers::pi * semi_short * semi_long; }

Ellipse Ellipse::perp() const { return Ellipse(center, semi_short, semi_long, e_short()); }

Mat2 Ellipse::shape() const {
  const Vec2 es = e_short();
  return semi_long * semi_long * e_long * e_long.transpose() +
         semi_short * semi_short * es * es.transpose();
}

double Ellipse::gauge(const Vec2& x) const {
  const Vec2 d = x - center;
  const double a = d.dot(e_long) / semi_long;
  const double b = d.dot(e_short()) / semi_short;
  return std::sqrt(a * a + b * b);
}

Ellipse Ellipse::transformed(const AffineMap& map) const {
  Mat2 m;
  m.col(0) = semi_long * e_long;
  m.col(1) = semi_short * e_short();
  const Mat2 am = map.linear() * m;
  return from_shape(map(center), am * am.transpose());
}

std::vector<Vec2> Ellipse::boundary_points(std::size_t count) const {
  std::vector<Vec2> pts;
  pts.reserve(count);
  const Vec2 es = e_short();
  for (std::size_t k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    pts.push_back(center + semi_long * std::cos(t) * e_long + semi_short * std::sin(t) * es);
  }
  return pts;
}

Ellipse fit_ellipse(const ConvexPolygon& p, double target_area) {
  if (!(target_area > 0.0)) throw GeometryError("fit_ellipse: target area must be positive");
  const SymEigen2 eig = sym_eig2(p.covariance());
  if (!(eig.small > 0.0)) throw GeometryError("fit_ellipse: degenerate polygon");
  const double eta = std::sqrt(eig.large / eig.small);
  const double semi_short = std::sqrt(target_area / (std::numbers::pi * eta));
  return Ellipse(p.centroid(), semi_short, eta * semi_short, eig.e_large);
}

AffineMap normalizing_map(const Ellipse& e) {
  const double shrink = std::sqrt(e.semi_short / e.semi_long);
  const Vec2 es = e.e_short();
  const Mat2 lin = shrink * e.e_long * e.e_long.transpose() + (1.0 / shrink) * es * es.transpose();
  // Rank-one sums leave det off by rounding; rescale to exact unimodularity.
  const Mat2 unit = lin / std::sqrt(lin.determinant());
  return AffineMap(unit, -(unit * e.center), true);
}

}  // namespace otreg
