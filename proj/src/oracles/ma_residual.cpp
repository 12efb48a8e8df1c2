#include "otreg/oracles/ma_residual.hpp"

#include "otreg/error.hpp"

#include <cmath>
#include <vector>

namespace otreg::oracles {

double ma_residual(const ot::PowerDiagram& diagram, std::span<const double> masses,
                   std::span<const std::size_t> cells) {
  if (masses.size() != diagram.size()) throw Error("ma_residual: one mass per cell is required");
  std::vector<char> seen(diagram.size(), 0);
  long double mass = 0.0L, area = 0.0L;
  for (std::size_t i : cells) {
    if (i >= diagram.size() || seen[i]) throw Error("ma_residual: region is not a union of distinct cells");
    seen[i] = 1;
    mass += masses[i];
    area += diagram.cells[i].empty() ? 0.0 : diagram.cells[i].area;
  }
  return static_cast<double>(std::fabs(mass - area));
}

}  // namespace otreg::oracles
