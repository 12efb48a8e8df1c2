#include "otreg/analysis/corner_growth.hpp"

#include "otreg/error.hpp"

namespace otreg::analysis {

CornerGrowth corner_growth(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& e,
                           const CornerGrowthOptions& options) {
  if (!(e.norm() > 0.0)) throw AnalysisError("corner_growth: zero direction");
  const Vec2 dir = e.normalized();
  const Vec2 g = options.slope ? *options.slope : psi.gradient(x0);
  const double s_min = options.s_min > 0.0 ? options.s_min : 3.0 * psi.cell_size();
  if (!(s_min < options.s_max)) throw AnalysisError("corner_growth: empty s-range");
  const double psi0 = psi(x0);
  const double tol = options.value_tol * psi.value_scale();
  CornerGrowth out;
  for (double s : geometric_grid(options.s_max, s_min, options.per_decade)) {
    const double v = psi(x0 + s * dir) - psi0 - s * g.dot(dir);
    if (v <= tol) {
      ++out.excluded;
      continue;
    }
    out.s.push_back(s);
    out.growth.push_back(v);
  }
  out.fit = fit_power_law(out.s, out.growth, options.fit);
  return out;
}

}  // namespace otreg::analysis
