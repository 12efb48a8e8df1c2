#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/vec.hpp"
#include "otreg/ot/piece_index.hpp"

#include <optional>
#include <span>
#include <vector>

namespace otreg::ot {

/// psi(x) = max_i (x . y_i - c_i), defined on the whole plane.
///
/// The domain is the polygon the potential was solved on (U1 for a Brenier
/// potential, U2 for its dual); it is informational and does not restrict
/// evaluation.
class PLConvexPotential {
 public:
  PLConvexPotential() = default;
  PLConvexPotential(std::vector<Vec2> slopes, std::vector<double> intercepts,
                    std::optional<ConvexPolygon> domain = std::nullopt);

  /// Pieces from Kantorovich weights: c_i = (|y_i|^2 - w_i) / 2.
  static PLConvexPotential from_weights(std::span<const Vec2> points, std::span<const double> weights,
                                        std::optional<ConvexPolygon> domain = std::nullopt);

  std::size_t size() const { return slopes_.size(); }
  const Vec2& slope(std::size_t i) const { return slopes_[i]; }
  double intercept(std::size_t i) const { return intercepts_[i]; }
  const std::vector<Vec2>& slopes() const { return slopes_; }
  const std::vector<double>& intercepts() const { return intercepts_; }
  const std::optional<ConvexPolygon>& domain() const { return domain_; }

  double piece_value(std::size_t i, const Vec2& x) const {
    return (x.x() * slopes_[i].x() + x.y() * slopes_[i].y()) - intercepts_[i];
  }

  double operator()(const Vec2& x) const { return index_.argmax(x).value; }
  double eval(const Vec2& x) const { return (*this)(x); }
  /// Maximum value together with a maximizing piece.
  kernels::ArgMax max_piece(const Vec2& x) const { return index_.argmax(x); }
  /// Index of a maximizing piece.
  std::size_t argmax(const Vec2& x) const { return index_.argmax(x).index; }
  /// Slope of a maximizing piece.
  Vec2 gradient(const Vec2& x) const { return slopes_[argmax(x)]; }
  /// Indices (ascending) of all pieces within tol of the maximum.
  std::vector<std::size_t> active_pieces(const Vec2& x, double tol) const;
  /// Slopes of all pieces within tol of the maximum: the extreme points of
  /// the subdifferential when tol is at rounding level.
  std::vector<Vec2> gradient_set(const Vec2& x, double tol) const;

  /// Magnitude of typical piece values on the domain; tolerances on values
  /// are taken relative to it.
  double value_scale() const { return value_scale_; }
  /// Typical linear size of a cell: sqrt(area(domain) / pieces). Zero when
  /// there is no domain.
  double cell_size() const;

 private:
  std::vector<Vec2> slopes_;
  std::vector<double> intercepts_;
  std::optional<ConvexPolygon> domain_;
  PieceIndex index_;
  double value_scale_ = 1.0;
};

}  // namespace otreg::ot
