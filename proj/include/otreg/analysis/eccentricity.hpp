#pragma once

#include "otreg/analysis/section.hpp"
#include "otreg/geometry/ellipse.hpp"

#include <string>
#include <vector>

namespace otreg::analysis {

struct EccentricitySample {
  double h = 0.0;
  double eta = 1.0;
  Ellipse ellipse;              // fitted to the centred section, area h
  double vol_ratio_in = 0.0;    // |S cap U1| / h
  double vol_ratio_full = 0.0;  // |S| / h
  double centring_residual = 0.0;
  double cells = 0.0;           // |S cap U1| in units of the mean cell area
  Vec2 slope;
  ConvexPolygon section;
};

struct SkippedSample {
  double h;
  std::string reason;
};

struct EccentricityCurve {
  Vec2 base;
  std::vector<EccentricitySample> samples;  // h strictly decreasing
  std::vector<SkippedSample> skipped;
  bool reached_floor = false;
};

struct CurveOptions {
  double h_max = 0.1;
  double h_min = 1e-3;
  std::size_t per_decade = 8;
  /// Stop once the section covers fewer power cells than this.
  double floor_cells = 20.0;
  CentringOptions centring;
};

/// eta(h) along a geometric h-grid from centred sections at x0. Each
/// sample warm-starts the centring from the previous slope. Sampling stops
/// at the cell floor; a centring failure skips that h.
EccentricityCurve eccentricity_curve(const ot::PLConvexPotential& psi, const ConvexPolygon& u1, const Vec2& x0,
                                     const CurveOptions& options = {});

/// Area of the section inside U1 in units of area(U1)/n.
double section_cells(const ConvexPolygon& section, const ConvexPolygon& u1, std::size_t pieces);

}  // namespace otreg::analysis
