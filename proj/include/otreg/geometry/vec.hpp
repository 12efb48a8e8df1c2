#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <utility>

namespace otreg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Counter-clockwise rotation by a right angle.
inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Eigen-decomposition of a symmetric 2x2 matrix.
struct SymEigen2 {
  double small;   // smaller eigenvalue
  double large;   // larger eigenvalue
  Vec2 e_large;   // unit eigenvector of `large`, sign-normalized
};

/// Closed form; the eigenvector sign is fixed so that the first nonzero
/// coordinate is positive, and a multiple of the identity reports (1, 0).
SymEigen2 sym_eig2(const Mat2& m);

/// Largest singular value of a 2x2 matrix.
double operator_norm(const Mat2& m);

}  // namespace otreg
