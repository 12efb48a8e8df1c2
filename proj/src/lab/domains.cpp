#include "otreg/lab/domains.hpp"

#include "otreg/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace otreg::lab {

ConvexPolygon unit_area(const ConvexPolygon& p) { return p.dilated(p.centroid(), 1.0 / std::sqrt(p.area())); }

ConvexPolygon regular_polygon(std::size_t sides) {
  if (sides < 3) throw ConfigError("regular polygon needs at least three sides");
  const double n = static_cast<double>(sides);
  // Circumradius for unit area: n/2 R^2 sin(2 pi / n) = 1.
  const double radius = std::sqrt(2.0 / (n * std::sin(2.0 * std::numbers::pi / n)));
  std::vector<Vec2> v;
  for (std::size_t k = 0; k < sides; ++k) {
    const double a = -0.5 * std::numbers::pi - std::numbers::pi / n + 2.0 * std::numbers::pi * static_cast<double>(k) / n;
    v.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  // Exact zeros keep axis-aligned squares axis-aligned.
  for (Vec2& p : v)
    for (int i = 0; i < 2; ++i)
      if (std::abs(p[i]) < 1e-15) p[i] = 0.0;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon random_hull(std::size_t points, std::uint64_t seed) {
  if (points < 3) throw ConfigError("random hull needs at least three points");
  std::mt19937_64 rng(seed);
  // Explicit 53-bit conversion: the standard distributions are not portable.
  const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = unit();
    pts.emplace_back(x, unit());
  }
  const ConvexPolygon hull = ConvexPolygon::hull(std::move(pts));
  const ConvexPolygon centred = hull.translated(-hull.centroid());
  return centred.dilated(Vec2::Zero(), 1.0 / std::sqrt(centred.area()));
}

ConvexPolygon rectangle(double aspect) {
  if (!(aspect > 0.0)) throw ConfigError("rectangle aspect must be positive");
  const double w = std::sqrt(aspect);
  return ConvexPolygon::box({0.0, 0.0}, {w, 1.0 / w});
}

ConvexPolygon wedge(double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi)) throw ConfigError("wedge angle must lie in (0, pi)");
  // Legs of length L: area L^2 sin(angle) / 2 = 1.
  const double len = std::sqrt(2.0 / std::sin(angle));
  const double a = 0.5 * angle;
  return ConvexPolygon({{0.0, 0.0}, {len * std::cos(a), -len * std::sin(a)}, {len * std::cos(a), len * std::sin(a)}});
}

ConvexPolygon critical_corner_source() { return ConvexPolygon::box({-1.0, 0.0}, {0.0, 1.0}); }

ConvexPolygon critical_corner_target() {
  const ConvexPolygon raw({{0.0, 0.0}, {0.0, 0.6}, {-1.0, 1.2}, {-1.3, 0.0}});
  return raw.dilated(Vec2::Zero(), 1.0 / std::sqrt(raw.area()));
}

}  // namespace otreg::lab
