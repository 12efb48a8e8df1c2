#include "otreg/oracles/assignment.hpp"

#include "otreg/error.hpp"

#include <limits>

namespace otreg::oracles {

double assignment_cost(std::span<const Vec2> sources, std::span<const Vec2> targets,
                       std::span<const std::size_t> target_of, double mass) {
  double cost = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i)
    cost += 0.5 * mass * (sources[i] - targets[target_of[i]]).squaredNorm();
  return cost;
}

Assignment exact_assignment(std::span<const Vec2> sources, std::span<const Vec2> targets, double mass) {
  const std::size_t n = sources.size();
  if (targets.size() != n) throw Error("exact_assignment: source and target counts differ");
  if (n == 0) throw Error("exact_assignment: empty input");
  if (n > kMaxAssignmentSize) throw Error("exact_assignment: size exceeds the oracle limit");
  if (!(mass > 0.0)) throw Error("exact_assignment: mass must be positive");

  // Shortest augmenting paths with row/column potentials; 1-based with a
  // virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  const auto cost = [&](std::size_t i, std::size_t j) { return 0.5 * (sources[i - 1] - targets[j - 1]).squaredNorm(); };
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.target_of.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.target_of[row_of[j] - 1] = j - 1;
  out.cost = assignment_cost(sources, targets, out.target_of, mass);
  return out;
}

}  // namespace otreg::oracles
