#include "otreg/analysis/section.hpp"

#include "otreg/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace otreg::analysis {

ConvexPolygon search_box(const ot::PLConvexPotential& psi) {
  if (!psi.domain()) throw AnalysisError("section: potential has no domain; pass a search box");
  const auto [lo, hi] = psi.domain()->bbox();
  const Vec2 c = 0.5 * (lo + hi), half = hi - lo;
  return ConvexPolygon::box(c - half, c + half);
}

Section section(const ot::PLConvexPotential& psi, const Vec2& x0, const Vec2& p, double h,
                const SectionOptions& options) {
  if (!(h > 0.0)) throw AnalysisError("section: height must be positive");
  const ConvexPolygon box = options.box ? *options.box : search_box(psi);
  const double base = psi(x0) - p.dot(x0) + h;  // cap(x) = base + p.x
  const double tol = 1e-13 * psi.value_scale();

  struct Vertex {
    Vec2 p;
    bool evaluated = false;
    double excess = 0.0;
    std::uint32_t arg = 0;
  };
  std::vector<Vertex> poly, next;
  for (const Vec2& v : box.vertices()) poly.push_back({v});
  const std::size_t guard = 4 * psi.size() + 64;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > guard) throw AnalysisError("section: construction did not terminate");
    double worst = tol;
    std::size_t worst_k = poly.size();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      Vertex& v = poly[k];
      if (!v.evaluated) {
        const kernels::ArgMax top = psi.max_piece(v.p);
        v.excess = top.value - (base + p.dot(v.p));
        v.arg = top.index;
        v.evaluated = true;
      }
      if (v.excess > worst) {
        worst = v.excess;
        worst_k = k;
      }
    }
    if (worst_k == poly.size()) break;
    // piece_j(x) <= cap(x)  <=>  x.(y_j - p) <= c_j + base
    const std::uint32_t j = poly[worst_k].arg;
    const Vec2 a = psi.slope(j) - p;
    const double b = psi.intercept(j) + base;
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vertex& u = poly[k];
      const Vertex& w = poly[(k + 1) % poly.size()];
      const double su = a.dot(u.p) - b, sw = a.dot(w.p) - b;
      if (su <= 0.0) next.push_back(u);
      if ((su < 0.0 && sw > 0.0) || (su > 0.0 && sw < 0.0)) next.push_back({u.p + (su / (su - sw)) * (w.p - u.p)});
    }
    poly.swap(next);
    if (poly.size() < 3) throw AnalysisError("section: empty section");
  }
  std::vector<Vec2> pts;
  pts.reserve(poly.size());
  for (const Vertex& v : poly) pts.push_back(v.p);
  auto made = ConvexPolygon::try_make(std::move(pts));
  if (!made) throw AnalysisError("section: degenerate section");

  bool touches = false;
  const double eps = 1e-9 * box.diameter();
  for (const Vec2& v : made->vertices())
    if (box.signed_distance(v) > -eps) touches = true;
  return Section{std::move(*made), x0, p, h, false, 0.0, 0, touches};
}

Section centred_section(const ot::PLConvexPotential& psi, const Vec2& x0, double h, const CentringOptions& options) {
  Vec2 p = options.initial_slope ? *options.initial_slope : psi.gradient(x0);
  double residual = 0.0;
  for (std::size_t it = 0; it <= options.max_iter; ++it) {
    Section s = section(psi, x0, p, h, options.section);
    const Vec2 gap = x0 - s.polygon.centroid();
    residual = gap.norm() / s.polygon.diameter();
    if (residual <= options.tol) {
      s.centred = true;
      s.centring_residual = residual;
      s.iterations = it;
      return s;
    }
    const Mat2 cov = s.polygon.covariance();
    p += options.damping * (0.5 * h) * cov.inverse() * gap;
  }
  throw AnalysisError("centred section did not converge (residual " + std::to_string(residual) + ")");
}

}  // namespace otreg::analysis
