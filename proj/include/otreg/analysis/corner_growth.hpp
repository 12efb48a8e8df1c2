#pragma once

#include "otreg/analysis/loglog_fit.hpp"
#include "otreg/ot/pl_potential.hpp"

#include <optional>
#include <vector>

namespace otreg::analysis {

struct CornerGrowthOptions {
  /// Supporting slope subtracted from psi; defaults to a gradient at x0.
  std::optional<Vec2> slope;
  double s_max = 0.2;
  double s_min = 0.0;           // 0: three cell sizes
  std::size_t per_decade = 8;
  double value_tol = 1e-9;      // relative to psi.value_scale(); smaller growth is excluded
  FitOptions fit;
};

struct CornerGrowth {
  PowerFit fit;
  std::vector<double> s, growth;  // retained samples
  std::size_t excluded = 0;
};

/// g(s) = psi(x0 + s e) - psi(x0) - s slope.e on a geometric s-grid, and the
/// exponent of the fitted power law g ~ C s^k. e is normalized.
CornerGrowth corner_growth(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& e,
                           const CornerGrowthOptions& options = {});

}  // namespace otreg::analysis
