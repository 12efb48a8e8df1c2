#include "otreg/analysis/renormalize.hpp"

#include "otreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace otreg::analysis {

double comparability(const ConvexPolygon& section, const ConvexPolygon& omega1, double t) {
  const Ellipse e = fit_ellipse(section, std::numbers::pi * t);
  double worst_gauge = 0.0;
  for (const Vec2& v : section.vertices()) worst_gauge = std::max(worst_gauge, e.gauge(v));
  const double outer = 1.0 / worst_gauge;
  const auto inside = intersect(section, omega1);
  if (!inside) return 0.0;
  // In coordinates where E_t is the disk of radius sqrt(t), a translate of
  // delta E_t is a disk of radius delta sqrt(t).
  const AffineMap n = normalizing_map(e);
  const double inner = largest_inscribed_disk(inside->transformed(n)).radius / std::sqrt(t);
  return std::min(inner, outer);
}

NormalizedPair renormalize(const ot::PLConvexPotential& psi, const ot::PowerDiagram& diagram,
                           const ConvexPolygon& u2, const Vec2& x0, double h, const Ellipse& e_h,
                           const RenormalizeOptions& options) {
  if (!(h > 0.0)) throw AnalysisError("renormalize: height must be positive");
  if (!psi.domain()) throw AnalysisError("renormalize: potential has no domain");
  const ConvexPolygon& u1 = *psi.domain();
  if (options.require_boundary && std::abs(u1.signed_distance(x0)) > 1e-9 * u1.diameter())
    throw AnalysisError("renormalize: base point is not on the boundary of U1");

  const Mat2 n = normalizing_map(e_h).linear();
  const double rh = std::sqrt(h);
  const AffineMap map(n / rh, -(n * x0) / rh);
  const Mat2 n_inv_t = n.inverse().transpose();
  const Vec2 g = psi.gradient(x0);
  const double psi0 = psi(x0);

  std::vector<Vec2> slopes(psi.size());
  std::vector<double> intercepts(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    slopes[i] = n_inv_t * (psi.slope(i) - g) / rh;
    intercepts[i] = (psi.intercept(i) + psi0 - x0.dot(psi.slope(i))) / h;
  }
  ConvexPolygon omega1 = u1.transformed(map);
  ConvexPolygon omega2 = u2.transformed(AffineMap(n_inv_t / rh, -(n_inv_t * g) / rh));
  ot::PLConvexPotential u(std::move(slopes), std::move(intercepts), omega1);

  // Dual over the mapped diagram vertices, with u evaluated from psi directly.
  std::vector<Vec2> vs;
  std::vector<double> vc;
  for (const Vec2& x : diagram.vertices()) {
    vs.push_back(map(x));
    vc.push_back((psi(x) - psi0 - g.dot(x - x0)) / h);
  }
  ot::PLConvexPotential v(std::move(vs), std::move(vc), omega2);

  NormalizedPair out{std::move(u), std::move(v), std::move(omega1), std::move(omega2), 0.0, n, map, x0, g, h, {}};

  // A section of u at height t is the image of a section of psi at height
  // t h, with area scaled by 1/h.
  const double cell_area = u1.area() / static_cast<double>(psi.size());
  double delta = std::numeric_limits<double>::infinity();
  CentringOptions centring = options.centring;
  for (double t : options.probe_heights) {
    Section s = centred_section(out.u, Vec2::Zero(), t, centring);
    const auto inside = intersect(s.polygon, out.omega1);
    if (!inside || inside->area() * h / cell_area < options.floor_cells) break;
    centring.initial_slope = s.slope;
    delta = std::min(delta, comparability(s.polygon, out.omega1, t));
    out.probed_heights.push_back(t);
  }
  if (out.probed_heights.empty()) throw AnalysisError("renormalize: every probe height is below the cell floor");
  out.delta_bar = delta;
  return out;
}

}  // namespace otreg::analysis
