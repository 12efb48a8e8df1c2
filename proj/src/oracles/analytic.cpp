#include "otreg/oracles/analytic.hpp"

#include "otreg/error.hpp"
#include "otreg/geometry/affine.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace otreg::oracles {

namespace {

Mat2 checked(const Mat2& a) {
  if (std::abs(a(0, 1) - a(1, 0)) > 1e-14 * a.norm()) throw Error("AnalyticPair: matrix is not symmetric");
  if (std::abs(a.determinant() - 1.0) > 1e-12) throw Error("AnalyticPair: determinant must be 1");
  if (!(a(0, 0) > 0.0)) throw Error("AnalyticPair: matrix is not positive definite");
  return a;
}

}  // namespace

AnalyticPair::AnalyticPair(const Mat2& a, ConvexPolygon u1)
    : a_(checked(a)), a_inv_(a_.inverse()), u1_(std::move(u1)),
      u2_(u1_.transformed(AffineMap::linear_map(a_, true))) {}

AnalyticPair AnalyticPair::diagonal(double a, ConvexPolygon u1) {
  Mat2 m;
  m << a, 0.0, 0.0, 1.0 / a;
  return AnalyticPair(m, std::move(u1));
}

Ellipse AnalyticPair::section(const Vec2& x0, double h) const { return Ellipse::from_shape(x0, 2.0 * h * a_inv_); }

Ellipse AnalyticPair::dual_section(const Vec2& y0, double h) const { return Ellipse::from_shape(y0, 2.0 * h * a_); }

double AnalyticPair::eta() const {
  const Eigen::SelfAdjointEigenSolver<Mat2> es(a_, Eigen::EigenvaluesOnly);
  return std::sqrt(es.eigenvalues()[1] / es.eigenvalues()[0]);
}

ot::PLConvexPotential AnalyticPair::tangent_planes(std::size_t k) const {
  const auto [lo, hi] = u1_.bbox();
  std::vector<Vec2> slopes;
  std::vector<double> intercepts;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const Vec2 x(lo.x() + (hi.x() - lo.x()) * (static_cast<double>(c) + 0.5) / static_cast<double>(k),
                   lo.y() + (hi.y() - lo.y()) * (static_cast<double>(r) + 0.5) / static_cast<double>(k));
      if (!u1_.contains(x)) continue;
      // x.Ax_k - c = psi(x_k) + Ax_k.(x - x_k)  =>  c = psi(x_k)
      slopes.push_back(a_ * x);
      intercepts.push_back(psi(x));
    }
  }
  return ot::PLConvexPotential(std::move(slopes), std::move(intercepts), u1_);
}

}  // namespace otreg::oracles
