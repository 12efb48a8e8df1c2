#include "otreg/ot/legendre.hpp"

#include "otreg/error.hpp"

namespace otreg::ot {

PLConvexPotential legendre_dual(const PLConvexPotential& psi, const PowerDiagram& diagram,
                                std::optional<ConvexPolygon> target) {
  std::vector<Vec2> xs = diagram.vertices();
  if (xs.empty()) throw Error("legendre_dual: diagram has no vertices");
  std::vector<double> values(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) values[k] = psi(xs[k]);
  return PLConvexPotential(std::move(xs), std::move(values), std::move(target));
}

PLConvexPotential legendre_dual(const PLConvexPotential& psi, const ConvexPolygon& u1,
                                std::optional<ConvexPolygon> target) {
  return legendre_dual(psi, power_diagram(u1, psi), std::move(target));
}

}  // namespace otreg::ot
