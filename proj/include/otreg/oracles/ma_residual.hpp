#pragma once

#include "otreg/ot/power_diagram.hpp"

#include <cstddef>
#include <span>

namespace otreg::oracles {

/// |sum of target masses over Q - area of Q| for Q the union of the given
/// power cells: the Alexandrov measure of the gradient image of Q against
/// the uniform measure. Throws Error on an out-of-range or repeated index.
double ma_residual(const ot::PowerDiagram& diagram, std::span<const double> masses,
                   std::span<const std::size_t> cells);

}  // namespace otreg::oracles
