#pragma once

#include "otreg/geometry/polygon.hpp"
#include "otreg/ot/pl_potential.hpp"
#include "otreg/ot/power_diagram.hpp"

#include <optional>

namespace otreg::ot {

/// Legendre transform of psi restricted to U1, in the y-variables:
/// v(y) = max_k (x_k . y - psi(x_k)) over the vertices x_k of the power
/// diagram of psi in U1. Exact for PL psi: x -> x.y - psi(x) is concave and
/// piecewise affine on the subdivision, so its maximum over U1 sits at a
/// vertex. The target polygon, when given, becomes the domain of v.
PLConvexPotential legendre_dual(const PLConvexPotential& psi, const PowerDiagram& diagram,
                                std::optional<ConvexPolygon> target = std::nullopt);

/// Same, building the diagram of psi in u1 first.
PLConvexPotential legendre_dual(const PLConvexPotential& psi, const ConvexPolygon& u1,
                                std::optional<ConvexPolygon> target = std::nullopt);

}  // namespace otreg::ot
