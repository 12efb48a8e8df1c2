#include "otreg/ot/newton.hpp"

#include "otreg/error.hpp"
#include "otreg/geometry/ellipse.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace otreg::ot {

namespace {

struct Residual {
  std::vector<double> r;
  double l2 = 0.0;
  double sup = 0.0;
  double min_area = 0.0;
};

Residual residual(const PowerDiagram& d, const std::vector<double>& masses) {
  Residual out;
  out.r.resize(masses.size());
  out.min_area = std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const double a = d.cells[i].empty() ? 0.0 : d.cells[i].area;
    out.r[i] = a - masses[i];
    s += out.r[i] * out.r[i];
    out.sup = std::max(out.sup, std::abs(out.r[i]));
    out.min_area = std::min(out.min_area, a);
  }
  out.l2 = std::sqrt(s);
  return out;
}

void fix_gauge(std::vector<double>& w) {
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());
  for (double& v : w) v -= mean;
}

// Weights whose diagram is the pullback of the Voronoi diagram of the cloud
// under x -> s x + b, where the image of U1 covers every point: no cell is
// empty. Power distance |x-y_i|^2 - w_i then differs from |s x + b - y_i|^2 / s
// by a term independent of i.
std::vector<double> covering_start(const ConvexPolygon& u1, const TargetCloud& cloud) {
  const Vec2 c1 = u1.centroid();
  Vec2 c2(0.0, 0.0);
  for (const Vec2& y : cloud.points) c2 += y;
  c2 /= static_cast<double>(cloud.size());
  double s = 0.0;
  for (const Vec2& y : cloud.points) {
    const Vec2 v = y - c2;
    for (std::size_t k = 0; k < u1.size(); ++k) {
      const Vec2 nrm(u1.edge(k).y(), -u1.edge(k).x());  // outward for CCW
      const double support = nrm.dot(u1[k] - c1);
      s = std::max(s, nrm.dot(v) / support);
    }
  }
  s = 1.05 * std::max(s, 1e-12);
  const Vec2 b = c2 - s * c1;
  std::vector<double> w(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    w[i] = cloud.points[i].squaredNorm() - (cloud.points[i] - b).squaredNorm() / s;
  return w;
}

void validate(const ConvexPolygon& u1, const TargetCloud& cloud, const SolverOptions& options) {
  using K = SolverError::Kind;
  if (cloud.size() == 0) throw SolverError(K::InvalidInput, "empty target cloud");
  if (cloud.masses.size() != cloud.size()) throw SolverError(K::InvalidInput, "mass and point counts differ");
  const double area = u1.area();
  long double total = 0.0L;
  for (double m : cloud.masses) {
    if (!(m > 0.0) || !std::isfinite(m)) throw SolverError(K::InvalidInput, "target masses must be positive");
    if (cloud.size() > 1 && !(m < area)) throw SolverError(K::InvalidInput, "a target mass exceeds the source area");
    total += m;
  }
  if (std::abs(static_cast<double>(total) - area) > 1e-12 * area)
    throw SolverError(K::InvalidInput, "target masses do not sum to the source area");
  for (const Vec2& y : cloud.points)
    if (!std::isfinite(y.x()) || !std::isfinite(y.y())) throw SolverError(K::InvalidInput, "non-finite target point");
  check_distinct(cloud.points);
  if (fit_ellipse(u1, area).eccentricity() > options.max_eccentricity)
    throw SolverError(K::InvalidInput, "source domain is too elongated");
  if (!(options.tol > 0.0)) throw SolverError(K::InvalidInput, "tolerance must be positive");
}

PowerDiagram diagram_for(const ConvexPolygon& u1, const TargetCloud& cloud, const std::vector<double>& w,
                         const std::vector<std::vector<std::uint32_t>>* hints) {
  DiagramOptions opt;
  opt.hints = hints;
  return power_diagram(u1, PLConvexPotential::from_weights(cloud.points, w, u1), opt);
}

// Newton direction: L delta = -r with the first weight pinned.
std::vector<double> newton_direction(const PowerDiagram& d, const std::vector<double>& r) {
  const std::size_t n = r.size();
  std::vector<double> delta(n, 0.0);
  if (n == 1) return delta;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> diag(n, 0.0);
  trip.reserve(2 * d.edges.size() + n);
  for (const DiagramEdge& e : d.edges) {
    const double k = e.length / (2.0 * e.distance);
    diag[e.i] += k;
    diag[e.j] += k;
    if (e.i > 0 && e.j > 0) {
      trip.emplace_back(static_cast<int>(e.i - 1), static_cast<int>(e.j - 1), -k);
      trip.emplace_back(static_cast<int>(e.j - 1), static_cast<int>(e.i - 1), -k);
    }
  }
  for (std::size_t i = 1; i < n; ++i) trip.emplace_back(static_cast<int>(i - 1), static_cast<int>(i - 1), diag[i]);
  const auto m = static_cast<Eigen::Index>(n - 1);
  Eigen::SparseMatrix<double> lap(m, m);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(lap);
  if (ldlt.info() != Eigen::Success)
    throw SolverError(SolverError::Kind::NonConvergence, "Newton system is singular");
  Eigen::VectorXd rhs(m);
  for (std::size_t i = 1; i < n; ++i) rhs[static_cast<Eigen::Index>(i - 1)] = -r[i];
  const Eigen::VectorXd x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !x.allFinite())
    throw SolverError(SolverError::Kind::NonConvergence, "Newton system solve failed");
  for (std::size_t i = 1; i < n; ++i) delta[i] = x[static_cast<Eigen::Index>(i - 1)];
  return delta;
}

}  // namespace

SolveResult newton_solve(const ConvexPolygon& u1, const TargetCloud& cloud, const SolverOptions& options) {
  validate(u1, cloud, options);
  const std::size_t n = cloud.size();
  const double area = u1.area();
  const double target = options.tol * area;

  bool scaled_start = false;
  std::vector<double> history, max_history;
  std::vector<double> w(n, 0.0);
  PowerDiagram d = diagram_for(u1, cloud, w, nullptr);
  if (d.empty_count() > 0) {
    w = covering_start(u1, cloud);
    fix_gauge(w);
    d = diagram_for(u1, cloud, w, nullptr);
    scaled_start = true;
    if (d.empty_count() > 0)
      throw SolverError(SolverError::Kind::InvalidInput, "could not find weights with all cells nonempty");
  }
  if (!d.connected()) throw SolverError(SolverError::Kind::Disconnected, "initial power diagram is disconnected");

  Residual res = residual(d, cloud.masses);
  const double min_mass = *std::min_element(cloud.masses.begin(), cloud.masses.end());
  const double eps0 = 0.5 * std::min(res.min_area, min_mass);
  history.push_back(res.l2);
  max_history.push_back(res.sup);
  if (options.verbose)
    std::cerr << "newton: n=" << n << " start=" << (scaled_start ? "covering" : "voronoi")
              << " max_residual=" << res.sup / area << "\n";

  std::size_t iter = 0;
  while (res.sup > target) {
    if (iter >= options.max_iter)
      throw SolverError(SolverError::Kind::NonConvergence,
                        "Newton did not converge in " + std::to_string(options.max_iter) + " iterations");
    const std::vector<double> delta = newton_direction(d, res.r);
    const auto hints = d.neighbors();
    double step = 1.0;
    bool accepted = false;
    for (std::size_t halving = 0; halving <= options.max_halvings; ++halving, step *= options.damping) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + step * delta[i];
      fix_gauge(trial);
      PowerDiagram td = diagram_for(u1, cloud, trial, &hints);
      Residual tr = residual(td, cloud.masses);
      if (tr.min_area >= eps0 && tr.l2 <= (1.0 - 0.5 * step) * res.l2) {
        w = std::move(trial);
        d = std::move(td);
        res = std::move(tr);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw SolverError(SolverError::Kind::NonConvergence, "Newton line search failed");
    ++iter;
    history.push_back(res.l2);
    max_history.push_back(res.sup);
    if (options.verbose)
      std::cerr << "newton: iter " << iter << " step=" << step << " max_residual=" << res.sup / area << "\n";
  }

  PLConvexPotential psi = PLConvexPotential::from_weights(cloud.points, w, u1);
  return SolveResult{DualWeights{std::move(w)}, std::move(psi), std::move(d), iter, res.sup, res.sup / area,
                     std::move(history), std::move(max_history), scaled_start};
}

}  // namespace otreg::ot
