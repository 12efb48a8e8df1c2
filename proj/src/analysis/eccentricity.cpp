#include "otreg/analysis/eccentricity.hpp"

#include "otreg/analysis/loglog_fit.hpp"
#include "otreg/error.hpp"

namespace otreg::analysis {

double section_cells(const ConvexPolygon& section, const ConvexPolygon& u1, std::size_t pieces) {
  const auto inside = intersect(section, u1);
  if (!inside) return 0.0;
  return inside->area() / (u1.area() / static_cast<double>(pieces));
}

EccentricityCurve eccentricity_curve(const ot::PLConvexPotential& psi, const ConvexPolygon& u1, const Vec2& x0,
                                     const CurveOptions& options) {
  EccentricityCurve curve;
  curve.base = x0;
  CentringOptions centring = options.centring;
  for (double h : geometric_grid(options.h_max, options.h_min, options.per_decade)) {
    Section s = [&]() -> Section {
      try {
        return centred_section(psi, x0, h, centring);
      } catch (const AnalysisError& e) {
        curve.skipped.push_back({h, e.what()});
        return Section{ConvexPolygon::box({0, 0}, {1, 1}), x0, Vec2::Zero(), -1.0};
      }
    }();
    if (s.height < 0.0) continue;
    const auto inside = intersect(s.polygon, u1);
    const double in_area = inside ? inside->area() : 0.0;
    const double cells = in_area / (u1.area() / static_cast<double>(psi.size()));
    if (cells < options.floor_cells) {
      curve.reached_floor = true;
      break;
    }
    centring.initial_slope = s.slope;
    const Ellipse e = fit_ellipse(s.polygon, h);
    curve.samples.push_back(EccentricitySample{h, e.eccentricity(), e, in_area / h, s.polygon.area() / h,
                                               s.centring_residual, cells, s.slope, s.polygon});
  }
  return curve;
}

}  // namespace otreg::analysis
