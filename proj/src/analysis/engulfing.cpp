#include "otreg/analysis/engulfing.hpp"

#include "otreg/error.hpp"

namespace otreg::analysis {

EngulfingResult check_engulfing(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& x1, double h,
                                double t, double t_bar, const EngulfingOptions& options) {
  if (!(t >= 0.0) || !(t_bar > 0.0)) throw AnalysisError("engulfing: dilation factors must be positive");
  const Section s0 = centred_section(psi, x0, h, options.centring);
  const double tol = options.inclusion_tol * s0.polygon.diameter();
  if (t == 0.0) {
    if ((x1 - x0).norm() > tol) throw AnalysisError("engulfing: x1 is not in t S_h(x0)");
  } else if (!s0.polygon.dilated(x0, t).contains(x1, options.inclusion_tol)) {
    throw AnalysisError("engulfing: x1 is not in t S_h(x0)");
  }
  const ConvexPolygon outer = s0.polygon.dilated(x0, t_bar);

  const auto passes = [&](double s) {
    const Section s1 = centred_section(psi, x1, s * h, options.centring);
    return outer.contains(s1.polygon, options.inclusion_tol / t_bar);
  };

  double lo = 0.0, hi = 0.0;
  if (passes(1.0)) {
    lo = 1.0;
    while (true) {
      const double next = 2.0 * lo;
      if (next > options.s_max) return {lo, true};
      if (!passes(next)) {
        hi = next;
        break;
      }
      lo = next;
    }
  } else {
    hi = 1.0;
    while (true) {
      const double next = 0.5 * hi;
      if (next < options.s_min) return {0.0, false};
      if (passes(next)) {
        lo = next;
        break;
      }
      hi = next;
    }
  }
  for (std::size_t k = 0; k < options.bisections && hi - lo > 1e-9 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return {lo, false};
}

}  // namespace otreg::analysis
