#include "otreg/analysis/loglog_fit.hpp"

#include "otreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace otreg::analysis {

namespace {

struct Line {
  double slope, intercept;
  bool ok;
};

Line least_squares(const std::vector<double>& lx, const std::vector<double>& ly, const std::vector<std::size_t>& idx) {
  const double m = static_cast<double>(idx.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i : idx) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) return {0.0, 0.0, false};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, true};
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y, const FitOptions& options) {
  if (x.size() != y.size()) throw AnalysisError("power fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw AnalysisError("power fit: need at least three samples");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw AnalysisError("power fit: samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const Line fit = least_squares(lx, ly, all);
  if (!fit.ok) throw AnalysisError("power fit: x values are all equal");

  PowerFit out;
  out.exponent = fit.slope;
  out.log_prefactor = fit.intercept;
  out.samples = n;
  double my = 0.0;
  for (double v : ly) my += v;
  my /= static_cast<double>(n);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> slopes;
  slopes.reserve(options.resamples);
  std::vector<std::size_t> idx(n);
  while (slopes.size() < options.resamples) {
    for (std::size_t& i : idx) i = pick(rng);
    const Line b = least_squares(lx, ly, idx);
    if (b.ok) slopes.push_back(b.slope);
  }
  if (slopes.empty()) {
    out.ci_low = out.ci_high = out.exponent;
  } else {
    const double a = 0.5 * (1.0 - options.level);
    out.ci_low = quantile(slopes, a);
    out.ci_high = quantile(slopes, 1.0 - a);
  }
  return out;
}

std::vector<double> geometric_grid(double h_max, double h_min, std::size_t per_decade) {
  if (!(h_max > 0.0) || !(h_min > 0.0) || h_min > h_max || per_decade == 0)
    throw AnalysisError("geometric grid: need 0 < h_min <= h_max and a positive density");
  std::vector<double> g;
  const double decades = std::log10(h_max / h_min);
  const auto steps = static_cast<std::size_t>(std::floor(decades * static_cast<double>(per_decade) + 1e-9));
  for (std::size_t k = 0; k <= steps; ++k)
    g.push_back(h_max * std::pow(10.0, -static_cast<double>(k) / static_cast<double>(per_decade)));
  return g;
}

}  // namespace otreg::analysis
