#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace otreg::ot {

struct PowerCell {
  std::vector<Vec2> vertices;              // CCW; empty when the cell misses the domain
  std::vector<std::int32_t> edge_owner;    // neighbour across edge k, -1 on the domain boundary
  double area = 0.0;
  Vec2 centroid{0.0, 0.0};

  bool empty() const { return vertices.size() < 3 || !(area > 0.0); }
};

struct DiagramEdge {
  std::uint32_t i, j;  // i < j
  double length;       // length of the shared segment
  double distance;     // |y_i - y_j|
};

/// Restriction of the power diagram of the pieces of a PL potential to a
/// convex domain: cell i is where piece i attains the maximum.
struct PowerDiagram {
  ConvexPolygon domain;
  std::vector<PowerCell> cells;
  std::vector<DiagramEdge> edges;

  std::size_t size() const { return cells.size(); }
  std::vector<double> areas() const;
  double total_area() const;
  std::size_t empty_count() const;
  std::optional<ConvexPolygon> cell_polygon(std::size_t i) const;
  /// Per-cell neighbour lists (ascending).
  std::vector<std::vector<std::uint32_t>> neighbors() const;
  /// Vertices of the subdivision, deduplicated.
  std::vector<Vec2> vertices() const;
  /// Whether the nonempty cells form one connected component.
  bool connected() const;
};

struct DiagramOptions {
  /// Candidate neighbours per cell (e.g. from a previous diagram). Optional;
  /// only speeds up construction, never changes the result.
  const std::vector<std::vector<std::uint32_t>>* hints = nullptr;
};

/// Cells of the pieces of psi inside the domain. Each cell is built by
/// cutting the domain with the violated piece at its worst vertex until
/// every vertex is owned by the cell's own piece (to a value tolerance of
/// 1e-12 * psi.value_scale()); convexity of max - piece_i makes that check
/// exact.
PowerDiagram power_diagram(const ConvexPolygon& domain, const PLConvexPotential& psi,
                           const DiagramOptions& options = {});

/// Cell i = domain ∩ {x : |x-y_i|^2 - w_i <= |x-y_j|^2 - w_j for all j}.
/// Throws SolverError(InvalidInput) on duplicate points.
PowerDiagram power_diagram(const ConvexPolygon& domain, std::span<const Vec2> points,
                           std::span<const double> weights, const DiagramOptions& options = {});

void check_distinct(std::span<const Vec2> points);

}  // namespace otreg::ot
