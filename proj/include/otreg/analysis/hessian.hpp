#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"

#include <functional>
#include <vector>

namespace otreg::analysis {

struct HessianEstimate {
  Mat2 hessian = Mat2::Zero();
  double fit_residual = 0.0;  // RMS misfit of the quadratic, divided by r^2
  double radius = 0.0;
  double norm() const;        // spectral norm
};

/// Least-squares quadratic through f sampled on a 7x7 stencil filling the
/// square inscribed in the disk B_r(x). No resolution checks; exact on
/// quadratics up to rounding.
HessianEstimate hessian_estimate(const std::function<double(const Vec2&)>& f, const Vec2& x, double r);

/// Same for a solved potential. Requires the disk inside the potential's
/// domain and r at least three cell sizes; throws AnalysisError otherwise.
HessianEstimate hessian_estimate(const ot::PLConvexPotential& psi, const Vec2& x, double r);

struct W2pOptions {
  double mesh_size = 0.02;   // midpoint grid spacing
  double r_max = 0.05;       // largest fitting radius
  double collar_cells = 3.0; // excluded boundary collar, in cell sizes
};

struct W2pResult {
  double p = 1.0;
  double integral = 0.0;       // sum of |D^2 psi|^p over the covered grid cells
  double normalized = 0.0;     // integral scaled up to the full area
  double norm = 0.0;           // normalized^(1/p)
  double covered_area = 0.0;
  double excluded_area = 0.0;  // the boundary collar
  std::size_t samples = 0;
};

/// One sample of the Hessian field used by w2p_norms.
struct HessianSample {
  Vec2 x;
  double dist = 0.0;  // distance to the boundary of the domain
  HessianEstimate estimate;
};

/// Hessian field on the midpoint grid of U1, skipping the collar. The
/// fitting radius is max(dist/2, 3 cells) capped at r_max (never below the
/// floor, never above dist). cell_size is the resolution of f.
std::vector<HessianSample> hessian_field(const std::function<double(const Vec2&)>& f, const ConvexPolygon& u1,
                                         double cell_size, const W2pOptions& options);
std::vector<HessianSample> hessian_field(const ot::PLConvexPotential& psi, const W2pOptions& options);

/// L^p norms of the spectral norm of the Hessian field.
std::vector<W2pResult> w2p_norms(const std::vector<HessianSample>& field, const ConvexPolygon& u1,
                                 double mesh_size, const std::vector<double>& ps);

}  // namespace otreg::analysis
