#pragma once

#include "otreg/geometry/polygon.hpp"

#include <cstdint>

namespace otreg::lab {

// All generators return polygons of unit area.

/// Regular polygon centred at the origin with a horizontal bottom edge.
ConvexPolygon regular_polygon(std::size_t sides);

/// Convex hull of `points` seeded uniform points in the unit square,
/// centred at its centroid. Identical across runs for a fixed seed.
ConvexPolygon random_hull(std::size_t points, std::uint64_t seed);

/// [0, sqrt(a)] x [0, 1/sqrt(a)].
ConvexPolygon rectangle(double aspect);

/// Isosceles triangle with apex at the origin, opening angle `angle`
/// (radians) bisected by the positive x-axis.
ConvexPolygon wedge(double angle);

/// Both members of the critical-corner pair lie in the quadrant
/// {x1 < 0, x2 > 0} with a right-angle corner at the origin, where
/// their edges run along the two axes. The source is a square, the target
/// a quadrilateral.
ConvexPolygon critical_corner_source();
ConvexPolygon critical_corner_target();

/// Rescaled about its centroid to unit area.
ConvexPolygon unit_area(const ConvexPolygon& p);

}  // namespace otreg::lab
