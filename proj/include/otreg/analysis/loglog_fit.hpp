#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace otreg::analysis {

/// y ~ C x^exponent, fitted by unweighted least squares on (log x, log y).
struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double ci_low = 0.0;   // bootstrap percentile interval of the exponent
  double ci_high = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

struct FitOptions {
  std::size_t resamples = 200;
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Requires at least three points with x, y > 0 and two distinct x values;
/// throws AnalysisError otherwise. Resamples that happen to draw a single x
/// value are redrawn.
PowerFit fit_power_law(std::span<const double> x, std::span<const double> y, const FitOptions& options = {});

/// h_max, h_max * 10^(-1/k), ... down to h_min (inclusive within rounding).
std::vector<double> geometric_grid(double h_max, double h_min, std::size_t per_decade);

}  // namespace otreg::analysis
