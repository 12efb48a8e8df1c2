#pragma once

#include "otreg/geometry/vec.hpp"
#include "otreg/kernels/max_affine.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace otreg::ot {

/// Branch-and-bound index over affine pieces x.s_i - c_i.
///
/// The pieces are first written in whitened coordinates: fitting
/// c ~ s'Ps/2 + q.s (P positive definite) estimates where each piece wins,
/// x ~ Ps + q, and with R = P^{1/2}
///
///     x.s_i - c_i = z.t_i - c'_i + x.0,   z = R^{-1}(x - q), t_i = R s_i,
///                                          c'_i = c_i - q.s_i,
///
/// so the winning piece at x has t close to z. A kd-tree over t stores per
/// node the slope bounding box, the smallest intercept and the largest
/// |t|^2 - 2c'; these give upper bounds on every piece value in the node.
/// Leaves are scanned with the dispatched max_affine kernels. Without a
/// usable fit the transform is the identity. Reported values are always
/// re-evaluated in the original coordinates.
class PieceIndex {
 public:
  static constexpr std::uint32_t kLeafSize = 32;

  PieceIndex() = default;
  PieceIndex(std::span<const double> sx, std::span<const double> sy, std::span<const double> c);

  bool empty() const { return perm_.empty(); }
  std::size_t size() const { return perm_.size(); }

  /// Maximum piece value at x, with the original index of a maximizer.
  kernels::ArgMax argmax(const Vec2& x) const;

  /// Original indices (ascending) of all pieces with value >= threshold.
  void collect_at_least(const Vec2& x, double threshold, std::vector<std::uint32_t>& out) const;

 private:
  struct Node {
    double min_x, max_x, min_y, max_y, min_c;
    double max_w;      // max of |t|^2 - 2c'
    double magnitude;  // max |t|^2 + |max_w|, for the rounding slack
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
  };

  // Two bounds on max value over the node. The first maximizes z.t over the
  // box and takes the smallest intercept. The second uses
  // z.t - c' = (|z|^2 - |z-t|^2 + w) / 2 with w = |t|^2 - 2c', bounding |z-t|
  // from below by the distance to the box; it is padded for rounding.
  double upper_bound(const Node& node, double x, double y) const {
    const double bx = x >= 0.0 ? x * node.max_x : x * node.min_x;
    const double by = y >= 0.0 ? y * node.max_y : y * node.min_y;
    const double linear = (bx + by) - node.min_c;
    const double dx = x < node.min_x ? node.min_x - x : (x > node.max_x ? x - node.max_x : 0.0);
    const double dy = y < node.min_y ? node.min_y - y : (y > node.max_y ? y - node.max_y : 0.0);
    const double xx = x * x + y * y;
    const double quad = 0.5 * (xx - (dx * dx + dy * dy) + node.max_w) + 1e-12 * (xx + node.magnitude);
    return linear < quad ? linear : quad;
  }

  Vec2 whiten(const Vec2& x) const { return r_inv_ * (x - shift_); }
  double original_value(std::uint32_t i, const Vec2& x) const {
    return (x.x() * ox_[i] + x.y() * oy_[i]) - oc_[i];
  }
  // Bound on the difference between whitened and original values at x.
  double slack(const Vec2& x, const Vec2& z) const;
  kernels::ArgMax search(const Vec2& z) const;
  void gather(const Vec2& z, double threshold, std::vector<std::uint32_t>& out) const;

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::span<const double> tx,
                     std::span<const double> ty, std::span<const double> tc);

  std::vector<Node> nodes_;
  std::vector<double> sx_, sy_, c_;   // whitened, tree order
  std::vector<double> ox_, oy_, oc_;  // original, original order
  std::vector<std::uint32_t> perm_;
  Mat2 r_inv_ = Mat2::Identity();
  Vec2 shift_ = Vec2::Zero();
  bool whitened_ = false;
  double max_t2_ = 0.0, max_s2_ = 0.0, max_abs_c_ = 0.0;
};

}  // namespace otreg::ot
