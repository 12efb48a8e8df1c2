#pragma once

#include "otreg/geometry/polygon.hpp"

#include <cstdint>
#include <vector>

namespace otreg::ot {

/// Discretization of the uniform measure on U2.
struct TargetCloud {
  std::vector<Vec2> points;   // strictly inside U2
  std::vector<double> masses; // positive, summing to area(U1)

  std::size_t size() const { return points.size(); }
  double total_mass() const;
};

enum class LloydStart {
  Stratified,  // one jittered sample per grid stratum, seeded
  Grid,        // stratum centers; falls back to Stratified if the count is off
};

struct SampleOptions {
  std::size_t lloyd_iterations = 30;
  LloydStart start = LloydStart::Stratified;
};

/// n points quantizing the uniform density on U2 (Lloyd iterations from a
/// seeded start), each carrying mass source_area / n.
TargetCloud sample_target(const ConvexPolygon& u2, std::size_t n, std::uint64_t seed, double source_area,
                          const SampleOptions& options = {});

/// Lloyd iterations only (no mass assignment); used for source quantization
/// as well.
std::vector<Vec2> lloyd_points(const ConvexPolygon& domain, std::size_t n, std::uint64_t seed,
                               const SampleOptions& options = {});

}  // namespace otreg::ot
