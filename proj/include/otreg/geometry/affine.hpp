#pragma once

#include "otreg/geometry/vec.hpp"

namespace otreg {

/// x -> linear * x + translation.
///
/// Unimodular maps carry det(linear) = 1 to within 1e-12; construction
/// rejects non-invertible maps and unimodular maps that violate this.
class AffineMap {
 public:
  AffineMap() : linear_(Mat2::Identity()), translation_(0.0, 0.0), unimodular_(true) {}
  AffineMap(const Mat2& linear, const Vec2& translation, bool unimodular = false);

  static AffineMap identity() { return {}; }
  static AffineMap translation(const Vec2& t) { return AffineMap(Mat2::Identity(), t, true); }
  static AffineMap linear_map(const Mat2& m, bool unimodular = false) {
    return AffineMap(m, Vec2::Zero(), unimodular);
  }

  const Mat2& linear() const { return linear_; }
  const Vec2& translation() const { return translation_; }
  bool unimodular() const { return unimodular_; }
  double det() const { return linear_.determinant(); }
  double norm() const { return operator_norm(linear_); }

  Vec2 operator()(const Vec2& x) const { return linear_ * x + translation_; }
  AffineMap inverse() const;
  /// (*this) o other.
  AffineMap then_after(const AffineMap& other) const;
  friend AffineMap operator*(const AffineMap& a, const AffineMap& b) { return a.then_after(b); }

 private:
  Mat2 linear_;
  Vec2 translation_;
  bool unimodular_;
};

}  // namespace otreg
