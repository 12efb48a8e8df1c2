#include "doctest.h"

#include "otreg/error.hpp"
#include "otreg/geometry/affine.hpp"
#include "otreg/geometry/ellipse.hpp"
#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/rays.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>

using namespace otreg;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexPolygon unit_square() { return ConvexPolygon::box({0.0, 0.0}, {1.0, 1.0}); }

ConvexPolygon random_polygon(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec2> pts;
  for (int k = 0; k < m; ++k) pts.emplace_back(g(rng), g(rng));
  return ConvexPolygon::hull(pts);
}

ConvexPolygon regular(int m, double r = 1.0) {
  std::vector<Vec2> v;
  for (int k = 0; k < m; ++k) v.emplace_back(r * std::cos(2 * kPi * k / m), r * std::sin(2 * kPi * k / m));
  return ConvexPolygon(v);
}

Mat2 random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Mat2 a;
    a << u(rng), u(rng), u(rng), u(rng);
    const double d = a.determinant();
    if (std::abs(d) < 0.05) continue;
    if (d < 0) a.col(0) *= -1.0;
    return a / std::sqrt(std::abs(d));
  }
}

double fan_area(const ConvexPolygon& p) {
  double s = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) s += 0.5 * cross(p[k] - p[0], p[k + 1] - p[0]);
  return s;
}

}  // namespace

TEST_CASE("area of basic polygons") {
  CHECK(unit_square().area() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}}).area() == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const ConvexPolygon p = random_polygon(rng, 10);
    CHECK(std::abs(p.area() - fan_area(p)) <= 1e-12 * p.area());
  }
}

TEST_CASE("canonicalization") {
  // Clockwise input with a repeated and a collinear vertex.
  const ConvexPolygon p({{0, 0}, {0, 1}, {0, 1}, {1, 1}, {1, 0.5}, {1, 0}});
  CHECK(p.size() == 4);
  CHECK(polygon_signed_area(p.vertices()) > 0.0);
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), GeometryError);
  CHECK_FALSE(ConvexPolygon::try_make({{0, 0}, {1, 1}}).has_value());
}

TEST_CASE("clip_halfplane") {
  const auto half = clip_halfplane(unit_square(), {1.0, 0.0}, 0.5);
  REQUIRE(half.has_value());
  CHECK(half->area() == doctest::Approx(0.5));
  CHECK(half->contains(ConvexPolygon::box({0, 0}, {0.5, 1})));
  CHECK(ConvexPolygon::box({0, 0}, {0.5, 1}).contains(*half));

  const auto whole = clip_halfplane(unit_square(), {1.0, 1.0}, 5.0);
  REQUIRE(whole.has_value());
  CHECK(whole->vertices() == unit_square().vertices());
  CHECK_FALSE(clip_halfplane(unit_square(), {1.0, 0.0}, -1.0).has_value());

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), off(-0.5, 0.5);
  for (int t = 0; t < 50; ++t) {
    const ConvexPolygon p = random_polygon(rng, 12);
    const double a = ang(rng);
    const Vec2 n(std::cos(a), std::sin(a));
    const double c = n.dot(p.centroid()) + off(rng);
    const auto in = clip_halfplane(p, n, c);
    const auto out = clip_halfplane(p, -n, -c);
    const double sum = (in ? in->area() : 0.0) + (out ? out->area() : 0.0);
    CHECK(std::abs(sum - p.area()) <= 1e-12 * p.area());
    if (in) CHECK(in->area() <= p.area() * (1 + 1e-12));
  }
}

TEST_CASE("angle") {
  CHECK(angle({1, 0}, {0, 1}) == doctest::Approx(kPi / 2));
  CHECK(angle({1, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(angle({1, 0}, {-1, 1}) == doctest::Approx(3 * kPi / 4));
  CHECK_THROWS_AS(angle({0, 0}, {1, 0}), GeometryError);
}

TEST_CASE("cone membership") {
  const Cone c({0, 0}, {1, 0}, kPi / 4);
  CHECK(c.contains({1, 0.5}));
  CHECK_FALSE(c.contains({1, 1.5}));
  CHECK_FALSE(c.contains({0, 0}));
}

TEST_CASE("ellipse eccentricity and perp") {
  CHECK(Ellipse({0, 0}, 1, 3, {1, 0}).eccentricity() == doctest::Approx(3.0));
  CHECK(Ellipse::circle({0, 0}, 2).eccentricity() == doctest::Approx(1.0));
  Mat2 a;
  a << 2, 0, 0, 0.5;
  const Ellipse squeezed = Ellipse::circle({0, 0}, 1).transformed(AffineMap::linear_map(a, true));
  CHECK(squeezed.eccentricity() == doctest::Approx(4.0).epsilon(1e-12));

  const Ellipse e({0, 0}, 1, 2, {1, 0});
  const Ellipse p = e.perp();
  CHECK(std::abs(p.e_long.x()) < 1e-15);
  CHECK(std::abs(std::abs(p.e_long.y()) - 1.0) < 1e-15);
  CHECK(p.semi_short == 1.0);
  CHECK(p.semi_long == 2.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0), ang(0.0, 2 * kPi);
  for (int t = 0; t < 100; ++t) {
    const double s = u(rng), l = s + u(rng), th = ang(rng);
    const Ellipse r({u(rng), u(rng)}, s, l, {std::cos(th), std::sin(th)});
    const Ellipse pp = r.perp().perp();
    CHECK(pp.e_long == r.e_long);
    CHECK(pp.center == r.center);
    CHECK(r.perp().eccentricity() == r.eccentricity());
  }
}

TEST_CASE("fit_ellipse") {
  const Ellipse r = fit_ellipse(ConvexPolygon::box({-1, -3}, {1, 3}), 12.0);
  CHECK(r.eccentricity() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(r.e_long.x()) < 1e-12);
  CHECK(r.area() == doctest::Approx(12.0));

  const Ellipse d = fit_ellipse(regular(256), kPi);
  CHECK(std::abs(d.semi_long - 1.0) < 1e-3);
  CHECK(std::abs(d.semi_short - 1.0) < 1e-3);
  CHECK(d.center.norm() < 1e-12);
}

TEST_CASE("fit_ellipse equivariance under unimodular maps") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const ConvexPolygon p = random_polygon(rng, 9);
    const AffineMap a(random_unimodular(rng), {g(rng), g(rng)}, true);
    const Ellipse lhs = fit_ellipse(p.transformed(a), 1.7);
    const Ellipse rhs = fit_ellipse(p, 1.7).transformed(a);
    const double scale = lhs.semi_long;
    CHECK((lhs.shape() - rhs.shape()).norm() <= 1e-9 * scale * scale);
    CHECK((lhs.center - rhs.center).norm() <= 1e-9 * (1 + lhs.center.norm()));
  }
}

TEST_CASE("tangent rays") {
  const ConvexPolygon sq = unit_square();
  CHECK((right_tangent(sq, Vec2(0, 0)).direction - Vec2(1, 0)).norm() < 1e-15);
  CHECK((left_tangent(sq, Vec2(0, 0)).direction - Vec2(0, 1)).norm() < 1e-15);
  CHECK((left_tangent(sq, Vec2(0.5, 0)).direction - Vec2(-1, 0)).norm() < 1e-15);
  CHECK((right_tangent(sq, Vec2(0.5, 0)).direction - Vec2(1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(left_tangent(sq, Vec2(0.5, 0.5)), GeometryError);

  const ConvexPolygon hex = regular(6);
  const Vec2 v = hex[2];
  const Vec2 r = right_tangent(hex, v).direction, l = left_tangent(hex, v).direction;
  CHECK(angle(r, l) == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
  CHECK((rotate(r, 2 * kPi / 3) - l).norm() < 1e-12);

  // Supporting-ray property on random boundary points.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const ConvexPolygon p = random_polygon(rng, 8);
    const Vec2 x0 = p.point_at_arc(u(rng) * p.perimeter()).point;
    const Vec2 dr = right_tangent(p, x0).direction, dl = left_tangent(p, x0).direction;
    for (const Vec2& q : p.vertices()) {
      CHECK(cross(dr, q - x0) >= -1e-9 * p.diameter());
      CHECK(cross(dl, q - x0) <= 1e-9 * p.diameter());
    }
  }
}

TEST_CASE("normalizing_map") {
  const AffineMap id = normalizing_map(Ellipse::circle({1, 2}, 0.7));
  CHECK((id.linear() - Mat2::Identity()).norm() < 1e-15);
  CHECK((id({1, 2})).norm() < 1e-15);

  const AffineMap m = normalizing_map(Ellipse({0, 0}, 1, 4, {1, 0}));
  const auto sv = m.linear().jacobiSvd().singularValues();
  CHECK(sv[0] == doctest::Approx(2.0));
  CHECK(sv[1] == doctest::Approx(0.5));
  CHECK(m.norm() * m.norm() == doctest::Approx(4.0));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.1, 3.0), ang(0.0, 2 * kPi);
  for (int t = 0; t < 100; ++t) {
    const double s = u(rng), l = s * (1 + 5 * u(rng)), th = ang(rng);
    const Ellipse e({u(rng), -u(rng)}, s, l, {std::cos(th), std::sin(th)});
    const AffineMap a = normalizing_map(e);
    CHECK(std::abs(a.det() - 1.0) <= 1e-12);
    CHECK(std::abs(a.norm() * a.norm() - e.eccentricity()) <= 1e-9 * e.eccentricity());
    const Ellipse img = e.transformed(a);
    CHECK(std::abs(img.eccentricity() - 1.0) <= 1e-9);
    CHECK(img.center.norm() <= 1e-9 * (1 + e.center.norm()));
  }
}

TEST_CASE("operator norm is submultiplicative on unimodular maps") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const Mat2 a = random_unimodular(rng), b = random_unimodular(rng);
    CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-12));
  }
}

TEST_CASE("affine map algebra") {
  Mat2 a;
  a << 2, 1, 0, 0.5;
  const AffineMap m(a, {1, -1}, true);
  const AffineMap inv = m.inverse();
  const Vec2 x(0.3, -0.8);
  CHECK((inv(m(x)) - x).norm() < 1e-14);
  CHECK(((m * inv)(x) - x).norm() < 1e-14);
  CHECK_THROWS_AS(AffineMap(Mat2::Zero(), {0, 0}), GeometryError);
  CHECK_THROWS_AS(AffineMap(2.0 * Mat2::Identity(), {0, 0}, true), GeometryError);
}

TEST_CASE("largest inscribed disk") {
  const InscribedDisk d = largest_inscribed_disk(ConvexPolygon::box({0, 0}, {2, 1}));
  CHECK(d.radius == doctest::Approx(0.5).epsilon(1e-9));
  const InscribedDisk h = largest_inscribed_disk(regular(6));
  CHECK(h.radius == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-9));
}
