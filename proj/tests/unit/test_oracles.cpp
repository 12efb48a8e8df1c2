#include "doctest.h"

#include "otreg/error.hpp"
#include "otreg/oracles/analytic.hpp"
#include "otreg/oracles/assignment.hpp"
#include "otreg/oracles/ma_residual.hpp"
#include "otreg/ot/newton.hpp"
#include "otreg/ot/target_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace otreg;
using namespace otreg::oracles;

TEST_CASE("exact assignment on trivial inputs") {
  const std::vector<Vec2> one{{0.1, 0.2}}, other{{0.4, 0.6}};
  const Assignment a = exact_assignment(one, other, 1.0);
  CHECK(a.target_of == std::vector<std::size_t>{0});
  CHECK(a.cost == doctest::Approx(0.5 * 0.25));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts;
  for (int i = 0; i < 40; ++i) pts.emplace_back(u(rng), u(rng));
  const Assignment id = exact_assignment(pts, pts, 0.025);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(id.target_of[i] == i);
  CHECK(id.cost == 0.0);

  std::vector<Vec2> big(kMaxAssignmentSize + 1, Vec2::Zero());
  CHECK_THROWS_AS(exact_assignment(big, big, 1.0), Error);
  CHECK_THROWS_AS(exact_assignment(one, pts, 1.0), Error);
}

TEST_CASE("exact assignment beats random permutations and brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Brute force on n = 7.
  {
    std::vector<Vec2> s, t;
    for (int i = 0; i < 7; ++i) {
      s.emplace_back(u(rng), u(rng));
      t.emplace_back(2 * u(rng), u(rng));
    }
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      best = std::min(best, assignment_cost(s, t, perm, 1.0));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(exact_assignment(s, t, 1.0).cost == doctest::Approx(best).epsilon(1e-12));
  }
  const std::size_t n = 100;
  std::vector<Vec2> s, t;
  for (std::size_t i = 0; i < n; ++i) {
    s.emplace_back(u(rng), u(rng));
    t.emplace_back(u(rng) + 0.3, 2 * u(rng));
  }
  const Assignment a = exact_assignment(s, t, 1.0 / n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < 10000; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    REQUIRE(a.cost <= assignment_cost(s, t, perm, 1.0 / n) + 1e-15);
  }
}

TEST_CASE("analytic pair") {
  const ConvexPolygon sq = ConvexPolygon::box({0, 0}, {1, 1});
  const AnalyticPair id = AnalyticPair::diagonal(1.0, sq);
  CHECK(id.eta() == doctest::Approx(1.0));
  CHECK(id.psi({0.3, 0.4}) == doctest::Approx(0.125));

  const AnalyticPair p = AnalyticPair::diagonal(3.0, sq);
  CHECK(p.eta() == doctest::Approx(3.0));
  CHECK(p.target().area() == doctest::Approx(1.0));
  const Ellipse s = p.section(Vec2::Zero(), 0.01);
  CHECK(s.eccentricity() == doctest::Approx(3.0));
  CHECK(s.semi_short == doctest::Approx(std::sqrt(2 * 0.01 / 3.0)));
  const Ellipse d = p.dual_section(Vec2::Zero(), 0.01);
  CHECK(d.eccentricity() == doctest::Approx(3.0));
  CHECK(std::abs(d.e_long.dot(s.e_short())) == doctest::Approx(1.0));

  Mat2 bad;
  bad << 2.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(AnalyticPair(bad, sq), Error);

  // Young equality on the graph of the map, inequality elsewhere.
  Mat2 a;
  a << 2.0, 0.5, 0.5, 0.625;  // det = 1
  const AnalyticPair q(a, sq);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x(u(rng), u(rng)), y(u(rng), u(rng));
    CHECK(std::abs(q.psi(x) + q.dual(q.map(x)) - x.dot(q.map(x))) <= 1e-14);
    CHECK(q.psi(x) + q.dual(y) >= x.dot(y) - 1e-14);
  }

  // Tangent planes converge to psi from below.
  const ot::PLConvexPotential pl = q.tangent_planes(64);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x(0.5 + 0.5 * u(rng), 0.5 + 0.5 * u(rng));
    CHECK(pl(x) <= q.psi(x) + 1e-14);
    CHECK(q.psi(x) - pl(x) <= 1e-3);
  }
}

TEST_CASE("Monge-Ampere residual of a solved pair") {
  const ConvexPolygon u1 = ConvexPolygon::box({0, 0}, {1, 1});
  const ConvexPolygon u2 = ConvexPolygon::box({0, 0}, {2, 0.5});
  const ot::TargetCloud cloud = ot::sample_target(u2, 300, 1, 1.0);
  ot::SolverOptions opt;
  opt.tol = 1e-9;
  const ot::SolveResult r = ot::newton_solve(u1, cloud, opt);

  const std::vector<std::size_t> one{17};
  CHECK(ma_residual(r.diagram, cloud.masses, one) <= 1e-9);
  std::vector<std::size_t> all(cloud.size());
  std::iota(all.begin(), all.end(), 0);
  CHECK(ma_residual(r.diagram, cloud.masses, all) <= 1e-9);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    std::vector<std::size_t> perm = all;
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::vector<std::size_t> q(perm.begin(), perm.begin() + 10);
    const double whole = ma_residual(r.diagram, cloud.masses, q);
    CHECK(whole <= 10 * 1e-9);
    double parts = 0.0;
    for (std::size_t i : q) parts += ma_residual(r.diagram, cloud.masses, std::vector<std::size_t>{i});
    CHECK(whole <= parts + 1e-18);
  }
  const std::vector<std::size_t> dup{3, 3};
  CHECK_THROWS_AS(ma_residual(r.diagram, cloud.masses, dup), Error);
}
