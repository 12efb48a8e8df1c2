#include "otreg/geometry/affine.hpp"

#include "otreg/error.hpp"

#include <cmath>

namespace otreg {

AffineMap::AffineMap(const Mat2& linear, const Vec2& translation, bool unimodular)
    : linear_(linear), translation_(translation), unimodular_(unimodular) {
  const double d = linear_.determinant();
  const double scale = linear_.squaredNorm();
  if (!std::isfinite(d) || std::abs(d) <= 1e-14 * scale)
    throw GeometryError("affine map is not invertible");
  if (unimodular_ && std::abs(d - 1.0) > 1e-12)
    throw GeometryError("affine map flagged unimodular but det != 1");
}

AffineMap AffineMap::inverse() const {
  const Mat2 inv = linear_.inverse();
  AffineMap out(inv, -(inv * translation_), false);
  out.unimodular_ = unimodular_;
  return out;
}

AffineMap AffineMap::then_after(const AffineMap& other) const {
  AffineMap out(linear_ * other.linear_, linear_ * other.translation_ + translation_, false);
  out.unimodular_ = unimodular_ && other.unimodular_ && std::abs(out.det() - 1.0) <= 1e-12;
  return out;
}

}  // namespace otreg
