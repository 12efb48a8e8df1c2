#pragma once

#include "otreg/geometry/ellipse.hpp"
#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"

namespace otreg::oracles {

/// Closed-form transport between U1 and A U1 for symmetric positive
/// definite A with det A = 1: psi(x) = x.Ax/2, T(x) = Ax, v(y) = y.A^{-1}y/2.
class AnalyticPair {
 public:
  /// Throws Error unless A is symmetric positive definite with |det A - 1| <= 1e-12.
  AnalyticPair(const Mat2& a, ConvexPolygon u1);

  /// diag(a, 1/a).
  static AnalyticPair diagonal(double a, ConvexPolygon u1);

  const Mat2& matrix() const { return a_; }
  const ConvexPolygon& source() const { return u1_; }
  const ConvexPolygon& target() const { return u2_; }

  double psi(const Vec2& x) const { return 0.5 * x.dot(a_ * x); }
  Vec2 map(const Vec2& x) const { return a_ * x; }
  double dual(const Vec2& y) const { return 0.5 * y.dot(a_inv_ * y); }
  Mat2 hessian() const { return a_; }

  /// Section {x : psi(x) < psi(x0) + grad psi(x0).(x - x0) + h}: the ellipse
  /// x0 + {d : d.Ad < 2h}, unclipped.
  Ellipse section(const Vec2& x0, double h) const;
  /// Same for the dual potential at y0.
  Ellipse dual_section(const Vec2& y0, double h) const;
  /// Long-to-short axis ratio of every section: sqrt(lambda_max / lambda_min).
  double eta() const;

  /// Tangent-plane discretization: pieces x_k.A(x - x_k) + psi(x_k) at the
  /// centres of a k x k grid over the bounding box of U1 (kept when inside
  /// U1). Converges to psi uniformly at rate O(1/k^2).
  ot::PLConvexPotential tangent_planes(std::size_t k) const;

 private:
  Mat2 a_, a_inv_;
  ConvexPolygon u1_, u2_;
};

}  // namespace otreg::oracles
