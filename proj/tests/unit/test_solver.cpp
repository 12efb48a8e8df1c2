#include "doctest.h"

#include "otreg/error.hpp"
#include "otreg/ot/legendre.hpp"
#include "otreg/ot/newton.hpp"
#include "otreg/ot/power_diagram.hpp"
#include "otreg/ot/solution_io.hpp"
#include "otreg/ot/target_cloud.hpp"
#include "otreg/parallel.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace otreg;
using namespace otreg::ot;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon::box({0.0, 0.0}, {1.0, 1.0}); }

std::vector<Vec2> grid_points(int k) {
  std::vector<Vec2> pts;
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) pts.emplace_back((c + 0.5) / k, (r + 0.5) / k);
  return pts;
}

TargetCloud equal_masses(std::vector<Vec2> pts, double area) {
  const std::size_t n = pts.size();
  return TargetCloud{std::move(pts), std::vector<double>(n, area / static_cast<double>(n))};
}

}  // namespace

TEST_CASE("two-point diagrams") {
  const std::vector<Vec2> pts{{0.25, 0.5}, {0.75, 0.5}};
  const PowerDiagram v = power_diagram(unit_square(), pts, std::vector<double>{0.0, 0.0});
  CHECK(v.cells[0].area == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(v.cells[1].area == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(v.edges.size() == 1);
  CHECK(v.edges[0].length == doctest::Approx(1.0));
  CHECK(v.edges[0].distance == doctest::Approx(0.5));

  // w1 - w2 = d moves the bisector by d / (2 |y1 - y2|) toward y2.
  const double d = 0.1;
  const PowerDiagram s = power_diagram(unit_square(), pts, std::vector<double>{d, 0.0});
  CHECK(s.cells[0].area == doctest::Approx(0.5 + d / (2 * 0.5)).epsilon(1e-13));
  CHECK_THROWS_AS(power_diagram(unit_square(), std::vector<Vec2>{{0.5, 0.5}, {0.5, 0.5}}, std::vector<double>{0, 0}),
                  SolverError);
}

TEST_CASE("grid diagram is the grid") {
  const int k = 6;
  const PowerDiagram d = power_diagram(unit_square(), grid_points(k), std::vector<double>(k * k, 0.0));
  for (const PowerCell& c : d.cells) CHECK(c.area == doctest::Approx(1.0 / (k * k)).epsilon(1e-12));
  CHECK(d.edges.size() == static_cast<std::size_t>(2 * k * (k - 1)));
  CHECK(d.connected());
}

TEST_CASE("random diagrams tile the domain and match brute-force ownership") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0), wd(-0.01, 0.01);
  const ConvexPolygon dom({{0, 0}, {1, 0}, {1.3, 0.8}, {0.4, 1.2}, {-0.2, 0.6}});
  std::vector<Vec2> pts;
  std::vector<double> w;
  for (int i = 0; i < 300; ++i) {
    pts.emplace_back(u(rng), u(rng));
    w.push_back(wd(rng));
  }
  const PowerDiagram d = power_diagram(dom, pts, w);
  CHECK(std::abs(d.total_area() - dom.area()) <= 1e-9 * dom.area());
  const PLConvexPotential psi = PLConvexPotential::from_weights(pts, w, dom);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.cells[i].empty()) continue;
    const Vec2 c = d.cells[i].centroid;
    // Brute-force power distance at the centroid.
    std::size_t best = 0;
    double bv = 1e300;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double v = (c - pts[j]).squaredNorm() - w[j];
      if (v < bv) {
        bv = v;
        best = j;
      }
    }
    CHECK(best == i);
  }
  // Same diagram with several worker threads.
  set_thread_count(4);
  const PowerDiagram d4 = power_diagram(dom, pts, w);
  set_thread_count(1);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.cells[i].vertices == d4.cells[i].vertices);
}

TEST_CASE("sample_target") {
  const ConvexPolygon sq = unit_square();
  const TargetCloud one = sample_target(sq, 1, 3, 1.0);
  CHECK((one.points[0] - Vec2(0.5, 0.5)).norm() < 1e-12);

  SampleOptions grid;
  grid.start = LloydStart::Grid;
  const TargetCloud g = sample_target(sq, 25, 3, 1.0, grid);
  const auto ref = grid_points(5);
  for (std::size_t i = 0; i < 25; ++i) CHECK((g.points[i] - ref[i]).norm() < 1e-9);

  const ConvexPolygon tri({{0, 0}, {2, 0}, {0.5, 1.5}});
  const TargetCloud t = sample_target(tri, 200, 11, 0.7);
  CHECK(t.total_mass() == doctest::Approx(0.7).epsilon(1e-13));
  for (const Vec2& p : t.points) CHECK(tri.signed_distance(p) < 0.0);
  const TargetCloud t2 = sample_target(tri, 200, 11, 0.7);
  CHECK(t.points == t2.points);
}

TEST_CASE("Newton on the identity grid stays at zero weights") {
  const auto cloud = equal_masses(grid_points(8), 1.0);
  const SolveResult r = newton_solve(unit_square(), cloud);
  CHECK(r.iterations == 0);
  for (double w : r.weights.w) CHECK(std::abs(w) < 1e-14);
}

TEST_CASE("Newton converges on an anisotropic target") {
  const ConvexPolygon u1 = unit_square();
  const ConvexPolygon u2 = ConvexPolygon::box({0, 0}, {2, 0.5});
  const TargetCloud cloud = sample_target(u2, 400, 1, u1.area());
  SolverOptions opt;
  opt.tol = 1e-9;
  const SolveResult r = newton_solve(u1, cloud, opt);
  CHECK(r.tol_achieved <= 1e-9);
  CHECK(r.iterations <= 100);
  for (std::size_t k = 1; k < r.residual_history.size(); ++k)
    CHECK(r.residual_history[k] < r.residual_history[k - 1]);
  double wsum = 0.0;
  for (double w : r.weights.w) wsum += w;
  CHECK(std::abs(wsum) < 1e-12);
  CHECK(std::abs(r.diagram.total_area() - 1.0) < 1e-9);

  // Gradient monotonicity of the recovered map.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
    CHECK((r.potential.gradient(a) - r.potential.gradient(b)).dot(a - b) >= -1e-12);
  }

  // Dual potential: v(y_i) = c_i on nonempty cells and Young's inequality.
  const PLConvexPotential v = legendre_dual(r.potential, r.diagram, u2);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    CHECK(std::abs(v(cloud.points[i]) - r.potential.intercept(i)) <= 1e-12 * r.potential.value_scale());
  for (int t = 0; t < 500; ++t) {
    const Vec2 x(u(rng), u(rng)), y(2 * u(rng), 0.5 * u(rng));
    CHECK(r.potential(x) + v(y) >= x.dot(y) - 1e-12);
    const Vec2 gx = r.potential.gradient(x);
    CHECK(std::abs(r.potential(x) + v(gx) - x.dot(gx)) <= 1e-12);
  }
}

TEST_CASE("Newton starts from covering weights when Voronoi cells are empty") {
  const ConvexPolygon u1 = unit_square();
  const ConvexPolygon u2 = ConvexPolygon::box({5, 5}, {6, 6});
  const TargetCloud cloud = sample_target(u2, 100, 2, 1.0);
  const SolveResult r = newton_solve(u1, cloud);
  CHECK(r.scaled_start);
  CHECK(r.tol_achieved <= 1e-7);
}

TEST_CASE("Newton input validation") {
  const ConvexPolygon u1 = unit_square();
  TargetCloud bad{{{0.2, 0.2}, {0.8, 0.8}}, {0.5, 0.4}};
  CHECK_THROWS_AS(newton_solve(u1, bad), SolverError);
  TargetCloud dup{{{0.2, 0.2}, {0.2, 0.2}}, {0.5, 0.5}};
  CHECK_THROWS_AS(newton_solve(u1, dup), SolverError);
  const ConvexPolygon needle = ConvexPolygon::box({0, 0}, {1e3, 1e-4});
  TargetCloud c{{{0.2, 0.2}, {0.8, 0.8}}, {needle.area() / 2, needle.area() / 2}};
  CHECK_THROWS_AS(newton_solve(needle, c), SolverError);
  SolverOptions tight;
  tight.max_iter = 1;
  tight.tol = 1e-14;
  const TargetCloud cloud = sample_target(ConvexPolygon::box({0, 0}, {3, 1}), 200, 4, 1.0);
  try {
    newton_solve(u1, cloud, tight);
    FAIL("expected non-convergence");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::NonConvergence);
  }
}

TEST_CASE("solution file round trip") {
  const ConvexPolygon u1 = unit_square();
  const ConvexPolygon u2 = ConvexPolygon::box({0, 0}, {2, 0.5});
  const TargetCloud cloud = sample_target(u2, 50, 1, 1.0);
  const SolveResult r = newton_solve(u1, cloud);
  const Solution s = make_solution(u1, u2, cloud, r);
  const auto path = std::filesystem::temp_directory_path() / "otreg_solution_roundtrip.json";
  write_solution(path, s);
  const Solution back = read_solution(path);
  CHECK(back.cloud.points == s.cloud.points);
  CHECK(back.weights.w == s.weights.w);
  CHECK(back.iterations == s.iterations);
  CHECK(back.source.vertices() == s.source.vertices());
  std::filesystem::remove(path);
}
