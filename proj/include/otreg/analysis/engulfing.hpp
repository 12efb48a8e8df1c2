#pragma once

#include "otreg/analysis/section.hpp"

namespace otreg::analysis {

struct EngulfingResult {
  double s_bar = 0.0;  // largest s found with S_{sh}(x1) inside t_bar S_h(x0)
  bool capped = false;  // the search stopped at s_max while still passing
};

struct EngulfingOptions {
  double s_max = 64.0;
  double s_min = 1e-6;
  std::size_t bisections = 40;
  double inclusion_tol = 1e-9;  // relative to the diameter of the outer polygon
  CentringOptions centring;
};

/// Empirical engulfing constant. S_h(x0) is the centred section at x0 and
/// t S_h(x0) its dilation about x0. Requires x1 in t S_h(x0); then finds
/// the largest s with the centred section of height s h at x1 inside
/// t_bar S_h(x0), by doubling/halving to a bracket and bisecting. Throws
/// AnalysisError when the precondition fails.
EngulfingResult check_engulfing(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& x1, double h,
                                double t, double t_bar, const EngulfingOptions& options = {});

}  // namespace otreg::analysis
