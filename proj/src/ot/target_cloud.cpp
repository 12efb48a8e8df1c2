#include "otreg/ot/target_cloud.hpp"

#include "otreg/error.hpp"
#include "otreg/ot/power_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace otreg::ot {

double TargetCloud::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

namespace {

bool strictly_inside(const ConvexPolygon& p, const Vec2& x) { return p.signed_distance(x) < -1e-9 * p.diameter(); }

std::vector<Vec2> initial_points(const ConvexPolygon& domain, std::size_t n, std::uint64_t seed, LloydStart start) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto [lo, hi] = domain.bbox();
  const double spacing = std::sqrt(domain.area() / static_cast<double>(n));

  auto strata = [&](bool jitter) {
    const auto cols = static_cast<std::size_t>(std::max(1.0, std::round((hi.x() - lo.x()) / spacing)));
    const auto rows = static_cast<std::size_t>(std::max(1.0, std::round((hi.y() - lo.y()) / spacing)));
    const double dx = (hi.x() - lo.x()) / static_cast<double>(cols);
    const double dy = (hi.y() - lo.y()) / static_cast<double>(rows);
    std::vector<Vec2> pts;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const double u = jitter ? unit(rng) : 0.5;
        const double v = jitter ? unit(rng) : 0.5;
        const Vec2 p(lo.x() + (static_cast<double>(c) + u) * dx, lo.y() + (static_cast<double>(r) + v) * dy);
        if (strictly_inside(domain, p)) pts.push_back(p);
      }
    return pts;
  };

  if (start == LloydStart::Grid) {
    std::vector<Vec2> pts = strata(false);
    if (pts.size() == n) return pts;
  }
  std::vector<Vec2> pts = strata(true);
  if (pts.size() > n) {
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(n);
  }
  std::size_t guard = 0;
  while (pts.size() < n) {
    if (++guard > 1000 * n + 1000) throw GeometryError("could not sample interior points");
    const Vec2 p(lo.x() + unit(rng) * (hi.x() - lo.x()), lo.y() + unit(rng) * (hi.y() - lo.y()));
    if (strictly_inside(domain, p)) pts.push_back(p);
  }
  return pts;
}

}  // namespace

std::vector<Vec2> lloyd_points(const ConvexPolygon& domain, std::size_t n, std::uint64_t seed,
                               const SampleOptions& options) {
  if (n == 0) throw Error("sample_target: n must be positive");
  std::vector<Vec2> pts = initial_points(domain, n, seed, options.start);
  const std::vector<double> zero(n, 0.0);
  std::vector<std::vector<std::uint32_t>> hints;
  for (std::size_t it = 0; it < options.lloyd_iterations; ++it) {
    DiagramOptions dopt;
    if (!hints.empty()) dopt.hints = &hints;
    const PowerDiagram d = power_diagram(domain, pts, zero, dopt);
    for (std::size_t i = 0; i < n; ++i)
      if (!d.cells[i].empty()) pts[i] = d.cells[i].centroid;
    hints = d.neighbors();
  }
  return pts;
}

TargetCloud sample_target(const ConvexPolygon& u2, std::size_t n, std::uint64_t seed, double source_area,
                          const SampleOptions& options) {
  if (!(source_area > 0.0)) throw Error("sample_target: source area must be positive");
  TargetCloud cloud;
  cloud.points = lloyd_points(u2, n, seed, options);
  cloud.masses.assign(n, source_area / static_cast<double>(n));
  return cloud;
}

}  // namespace otreg::ot
