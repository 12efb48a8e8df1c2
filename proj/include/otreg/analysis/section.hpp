#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"

#include <optional>

namespace otreg::analysis {

/// {x : psi(x) < psi(x0) + p.(x - x0) + h}, clipped to the search box.
struct Section {
  ConvexPolygon polygon;
  Vec2 base;
  Vec2 slope;
  double height = 0.0;
  bool centred = false;
  double centring_residual = 0.0;  // |centroid - x0| / diam
  std::size_t iterations = 0;      // centring iterations
  bool touches_box = false;        // the search box was active
};

struct SectionOptions {
  /// Search box; defaults to the bounding box of psi's domain dilated 2x
  /// about its center.
  std::optional<ConvexPolygon> box;
};

/// Exact sublevel set of the PL potential, built by cutting the box with
/// the most violated piece at a vertex until every vertex satisfies the
/// inequality (convexity makes the vertex check sufficient). Throws
/// AnalysisError for h <= 0.
Section section(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& p, double h,
                const SectionOptions& options = {});

struct CentringOptions {
  double damping = 0.5;           // tau
  double tol = 1e-6;              // on |centroid - x0| / diam(section)
  std::size_t max_iter = 200;
  std::optional<Vec2> initial_slope;  // defaults to a gradient at x0
  SectionOptions section;
};

/// Section whose centroid is x0. The slope is updated by
///   p <- p + tau (h/2) Sigma^{-1} (x0 - centroid),
/// Sigma the covariance of the current section; for a quadratic potential
/// (h/2) Sigma^{-1} is exactly the inverse of d centroid / d p, so tau = 1
/// would be a Newton step. Throws AnalysisError on non-convergence.
Section centred_section(const ot::PLConvexPotential& psi, const Vec2& x0, double h,
                        const CentringOptions& options = {});

/// The default search box for psi.
ConvexPolygon search_box(const ot::PLConvexPotential& psi);

}  // namespace otreg::analysis
