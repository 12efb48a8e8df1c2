#include "otreg/ot/pl_potential.hpp"

#include "otreg/error.hpp"

#include <algorithm>
#include <cmath>

namespace otreg::ot {

PLConvexPotential::PLConvexPotential(std::vector<Vec2> slopes, std::vector<double> intercepts,
                                     std::optional<ConvexPolygon> domain)
    : slopes_(std::move(slopes)), intercepts_(std::move(intercepts)), domain_(std::move(domain)) {
  if (slopes_.size() != intercepts_.size()) throw Error("potential: slope and intercept counts differ");
  if (slopes_.empty()) throw Error("potential: no pieces");
  std::vector<double> sx(slopes_.size()), sy(slopes_.size());
  double max_c = 0.0, max_s = 0.0;
  for (std::size_t i = 0; i < slopes_.size(); ++i) {
    sx[i] = slopes_[i].x();
    sy[i] = slopes_[i].y();
    if (!std::isfinite(sx[i]) || !std::isfinite(sy[i]) || !std::isfinite(intercepts_[i]))
      throw Error("potential: non-finite piece");
    max_c = std::max(max_c, std::abs(intercepts_[i]));
    max_s = std::max(max_s, slopes_[i].norm());
  }
  double reach = 1.0;
  if (domain_) {
    const auto [lo, hi] = domain_->bbox();
    reach = std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()) * std::sqrt(2.0);
  }
  value_scale_ = std::max(max_c + max_s * reach, 1e-300);
  index_ = PieceIndex(sx, sy, intercepts_);
}

PLConvexPotential PLConvexPotential::from_weights(std::span<const Vec2> points, std::span<const double> weights,
                                                  std::optional<ConvexPolygon> domain) {
  if (points.size() != weights.size()) throw Error("potential: point and weight counts differ");
  std::vector<Vec2> slopes(points.begin(), points.end());
  std::vector<double> c(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) c[i] = 0.5 * (points[i].squaredNorm() - weights[i]);
  return PLConvexPotential(std::move(slopes), std::move(c), std::move(domain));
}

std::vector<std::size_t> PLConvexPotential::active_pieces(const Vec2& x, double tol) const {
  const double top = index_.argmax(x).value;
  std::vector<std::uint32_t> raw;
  index_.collect_at_least(x, top - tol, raw);
  return {raw.begin(), raw.end()};
}

std::vector<Vec2> PLConvexPotential::gradient_set(const Vec2& x, double tol) const {
  std::vector<Vec2> out;
  for (std::size_t i : active_pieces(x, tol)) out.push_back(slopes_[i]);
  return out;
}

double PLConvexPotential::cell_size() const {
  if (!domain_) return 0.0;
  return std::sqrt(domain_->area() / static_cast<double>(size()));
}

}  // namespace otreg::ot
