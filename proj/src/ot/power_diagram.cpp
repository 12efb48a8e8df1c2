#include "otreg/ot/power_diagram.hpp"

#include "otreg/error.hpp"
#include "otreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace otreg::ot {

namespace {

struct CellVertex {
  Vec2 p;
  std::int32_t label;  // owner of the edge starting here
  bool evaluated = false;
  double gap = 0.0;    // max_j value_j(p) - value_i(p)
  std::uint32_t arg = 0;
};

// Clip by {x : x.a <= b}; edges created on the cut line are labelled j.
void clip_labeled(const std::vector<CellVertex>& in, const Vec2& a, double b, double eps, std::int32_t j,
                  std::vector<CellVertex>& out) {
  out.clear();
  const std::size_t m = in.size();
  for (std::size_t k = 0; k < m; ++k) {
    const CellVertex& p = in[k];
    const CellVertex& q = in[(k + 1) % m];
    const double sp = a.dot(p.p) - b;
    const double sq = a.dot(q.p) - b;
    const bool pin = sp <= eps, qin = sq <= eps;
    if (pin) {
      out.push_back(p);
      if (!qin) out.back().label = j;
      if (!qin && sp < -eps) {
        const double t = sp / (sp - sq);
        out.back().label = p.label;
        out.push_back({p.p + t * (q.p - p.p), j});
      }
    } else if (qin && sq < -eps) {
      const double t = sp / (sp - sq);
      out.push_back({p.p + t * (q.p - p.p), p.label});
    }
  }
}

void build_cell(std::size_t i, const ConvexPolygon& domain, const PLConvexPotential& psi,
                const std::vector<std::uint32_t>* hint, double tol, PowerCell& cell) {
  std::vector<CellVertex> poly, next;
  poly.reserve(16);
  for (const Vec2& v : domain.vertices()) poly.push_back({v, -1});
  const Vec2 yi = psi.slope(i);
  const double ci = psi.intercept(i);

  auto cut = [&](std::uint32_t j) {
    const Vec2 a = psi.slope(j) - yi;
    clip_labeled(poly, a, psi.intercept(j) - ci, tol, static_cast<std::int32_t>(j), next);
    poly.swap(next);
  };

  if (hint != nullptr)
    for (std::uint32_t j : *hint) {
      if (j == i) continue;
      cut(j);
      if (poly.size() < 3) break;
    }

  const std::size_t guard = 8 * psi.size() + 64;
  for (std::size_t iter = 0; poly.size() >= 3; ++iter) {
    if (iter > guard) throw SolverError(SolverError::Kind::InvalidInput, "power cell construction did not terminate");
    double worst = tol;
    std::size_t worst_k = poly.size();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      CellVertex& v = poly[k];
      if (!v.evaluated) {
        const kernels::ArgMax top = psi.max_piece(v.p);
        v.gap = top.value - psi.piece_value(i, v.p);
        v.arg = top.index;
        v.evaluated = true;
      }
      if (v.gap > worst) {
        worst = v.gap;
        worst_k = k;
      }
    }
    if (worst_k == poly.size()) break;
    cut(poly[worst_k].arg);
  }

  cell = PowerCell{};
  if (poly.size() < 3) return;
  std::vector<Vec2> pts;
  pts.reserve(poly.size());
  for (const CellVertex& v : poly) pts.push_back(v.p);
  const double area = polygon_signed_area(pts);
  if (!(area > 0.0)) return;
  cell.area = area;
  cell.centroid = polygon_centroid(pts);
  cell.vertices = std::move(pts);
  cell.edge_owner.reserve(poly.size());
  for (const CellVertex& v : poly) cell.edge_owner.push_back(v.label);
}

}  // namespace

void check_distinct(std::span<const Vec2> points) {
  std::vector<Vec2> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k] == sorted[k - 1]) throw SolverError(SolverError::Kind::InvalidInput, "duplicate target points");
}

PowerDiagram power_diagram(const ConvexPolygon& domain, const PLConvexPotential& psi, const DiagramOptions& options) {
  const std::size_t n = psi.size();
  PowerDiagram d{domain, std::vector<PowerCell>(n), {}};
  const double tol = 1e-12 * psi.value_scale();
  if (options.hints != nullptr && options.hints->size() != n) throw Error("power diagram: hint list size mismatch");
  parallel_for(n, [&](std::size_t i) {
    build_cell(i, domain, psi, options.hints ? &(*options.hints)[i] : nullptr, tol, d.cells[i]);
  });

  // Shared segment lengths, averaged over the two sides.
  const double min_len = 1e-14 * domain.diameter();
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<double, double>> lengths;
  for (std::size_t i = 0; i < n; ++i) {
    const PowerCell& c = d.cells[i];
    for (std::size_t k = 0; k < c.vertices.size(); ++k) {
      const std::int32_t j = c.edge_owner[k];
      if (j < 0) continue;
      const double len = (c.vertices[(k + 1) % c.vertices.size()] - c.vertices[k]).norm();
      if (len <= min_len) continue;
      const auto ui = static_cast<std::uint32_t>(i), uj = static_cast<std::uint32_t>(j);
      auto& slot = lengths[{std::min(ui, uj), std::max(ui, uj)}];
      (ui < uj ? slot.first : slot.second) += len;
    }
  }
  d.edges.reserve(lengths.size());
  for (const auto& [key, lens] : lengths) {
    const double len = (lens.first > 0.0 && lens.second > 0.0) ? 0.5 * (lens.first + lens.second)
                                                               : std::max(lens.first, lens.second);
    d.edges.push_back({key.first, key.second, len, (psi.slope(key.first) - psi.slope(key.second)).norm()});
  }
  return d;
}

PowerDiagram power_diagram(const ConvexPolygon& domain, std::span<const Vec2> points, std::span<const double> weights,
                           const DiagramOptions& options) {
  check_distinct(points);
  return power_diagram(domain, PLConvexPotential::from_weights(points, weights, domain), options);
}

std::vector<double> PowerDiagram::areas() const {
  std::vector<double> a(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) a[i] = cells[i].area;
  return a;
}

double PowerDiagram::total_area() const {
  double s = 0.0;
  for (const PowerCell& c : cells) s += c.area;
  return s;
}

std::size_t PowerDiagram::empty_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const PowerCell& c) { return c.empty(); }));
}

std::optional<ConvexPolygon> PowerDiagram::cell_polygon(std::size_t i) const {
  if (cells[i].empty()) return std::nullopt;
  return ConvexPolygon::try_make(cells[i].vertices);
}

std::vector<std::vector<std::uint32_t>> PowerDiagram::neighbors() const {
  std::vector<std::vector<std::uint32_t>> nb(cells.size());
  for (const DiagramEdge& e : edges) {
    nb[e.i].push_back(e.j);
    nb[e.j].push_back(e.i);
  }
  for (auto& l : nb) std::sort(l.begin(), l.end());
  return nb;
}

std::vector<Vec2> PowerDiagram::vertices() const {
  std::vector<Vec2> all;
  for (const PowerCell& c : cells) all.insert(all.end(), c.vertices.begin(), c.vertices.end());
  std::sort(all.begin(), all.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  const double tol = 1e-12 * domain.diameter();
  std::vector<Vec2> out;
  for (const Vec2& p : all)
    if (out.empty() || (p - out.back()).cwiseAbs().maxCoeff() > tol) out.push_back(p);
  return out;
}

bool PowerDiagram::connected() const {
  const std::size_t n = cells.size();
  std::vector<char> seen(n, 0);
  const auto nb = neighbors();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!cells[i].empty()) {
      start = i;
      break;
    }
  if (start == n) return false;
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::uint32_t j : nb[i])
      if (!seen[j] && !cells[j].empty()) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
  }
  return reached == n - empty_count();
}

}  // namespace otreg::ot
