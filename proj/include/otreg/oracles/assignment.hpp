#pragma once

#include "otreg/geometry/vec.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace otreg::oracles {

inline constexpr std::size_t kMaxAssignmentSize = 500;

struct Assignment {
  std::vector<std::size_t> target_of;  // source i goes to target target_of[i]
  double cost = 0.0;                   // sum of mass * |x - y|^2 / 2
};

/// Optimal assignment between n sources and n targets of equal mass under
/// the cost |x - y|^2 / 2 (Hungarian algorithm, O(n^3)). Throws Error for
/// n above kMaxAssignmentSize, mismatched sizes or unequal masses.
Assignment exact_assignment(std::span<const Vec2> sources, std::span<const Vec2> targets, double mass);

/// Cost of an arbitrary assignment, for comparison.
double assignment_cost(std::span<const Vec2> sources, std::span<const Vec2> targets,
                       std::span<const std::size_t> target_of, double mass);

}  // namespace otreg::oracles
