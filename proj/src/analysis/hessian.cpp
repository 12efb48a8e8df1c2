#include "otreg/analysis/hessian.hpp"

#include "otreg/error.hpp"
#include "otreg/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace otreg::analysis {

double HessianEstimate::norm() const {
  const Eigen::SelfAdjointEigenSolver<Mat2> es(hessian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

HessianEstimate hessian_estimate(const std::function<double(const Vec2&)>& f, const Vec2& x, double r) {
  if (!(r > 0.0)) throw AnalysisError("hessian_estimate: radius must be positive");
  constexpr int k = 7;
  const double half = 1.0 / std::sqrt(2.0);
  Eigen::Matrix<double, k * k, 6> design;
  Eigen::Matrix<double, k * k, 1> rhs;
  const double f0 = f(x);
  int row = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j, ++row) {
      // unit coordinates in [-1/sqrt2, 1/sqrt2]
      const double a = half * (2.0 * i / (k - 1) - 1.0);
      const double b = half * (2.0 * j / (k - 1) - 1.0);
      design.row(row) << 1.0, a, b, 0.5 * a * a, a * b, 0.5 * b * b;
      rhs[row] = f(x + r * Vec2(a, b)) - f0;
    }
  }
  const Eigen::Matrix<double, 6, 1> coef = design.colPivHouseholderQr().solve(rhs);
  const double r2 = r * r;
  HessianEstimate out;
  out.hessian << coef[3] / r2, coef[4] / r2, coef[4] / r2, coef[5] / r2;
  out.fit_residual = std::sqrt((design * coef - rhs).squaredNorm() / (k * k)) / r2;
  out.radius = r;
  return out;
}

HessianEstimate hessian_estimate(const ot::PLConvexPotential& psi, const Vec2& x, double r) {
  if (!psi.domain()) throw AnalysisError("hessian_estimate: potential has no domain");
  if (r < 3.0 * psi.cell_size() * (1.0 - 1e-12)) throw AnalysisError("hessian_estimate: radius below resolution");
  if (psi.domain()->signed_distance(x) > -r * (1.0 - 1e-12))
    throw AnalysisError("hessian_estimate: disk not inside the domain");
  return hessian_estimate([&psi](const Vec2& z) { return psi(z); }, x, r);
}

std::vector<HessianSample> hessian_field(const std::function<double(const Vec2&)>& f, const ConvexPolygon& u1,
                                         double cell_size, const W2pOptions& options) {
  const double floor = 3.0 * cell_size;
  const double collar = options.collar_cells * cell_size;
  const auto [lo, hi] = u1.bbox();
  const double m = options.mesh_size;
  const auto cols = static_cast<std::size_t>(std::ceil((hi.x() - lo.x()) / m));
  const auto rows = static_cast<std::size_t>(std::ceil((hi.y() - lo.y()) / m));
  std::vector<HessianSample> pts;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Vec2 x = lo + Vec2((static_cast<double>(c) + 0.5) * m, (static_cast<double>(r) + 0.5) * m);
      const double dist = -u1.signed_distance(x);
      if (dist < collar || dist < floor) continue;
      pts.push_back({x, dist, {}});
    }
  }
  parallel_for(pts.size(), [&](std::size_t i) {
    const double d = pts[i].dist;
    const double radius = std::min(std::max(std::min(0.5 * d, options.r_max), floor), d);
    pts[i].estimate = hessian_estimate(f, pts[i].x, radius);
  });
  return pts;
}

std::vector<HessianSample> hessian_field(const ot::PLConvexPotential& psi, const W2pOptions& options) {
  if (!psi.domain()) throw AnalysisError("hessian_field: potential has no domain");
  return hessian_field([&psi](const Vec2& z) { return psi(z); }, *psi.domain(), psi.cell_size(), options);
}

std::vector<W2pResult> w2p_norms(const std::vector<HessianSample>& field, const ConvexPolygon& u1,
                                 double mesh_size, const std::vector<double>& ps) {
  std::vector<double> norms;
  norms.reserve(field.size());
  for (const HessianSample& s : field) norms.push_back(s.estimate.norm());
  const double cell = mesh_size * mesh_size;
  const double covered = cell * static_cast<double>(field.size());
  std::vector<W2pResult> out;
  for (double p : ps) {
    if (!(p > 0.0)) throw AnalysisError("w2p_norms: p must be positive");
    double sum = 0.0;
    for (double v : norms) sum += std::pow(v, p);
    W2pResult r;
    r.p = p;
    r.integral = sum * cell;
    r.covered_area = covered;
    r.excluded_area = std::max(0.0, u1.area() - covered);
    r.normalized = covered > 0.0 ? r.integral * u1.area() / covered : 0.0;
    r.norm = std::pow(r.normalized, 1.0 / p);
    r.samples = field.size();
    out.push_back(r);
  }
  return out;
}

}  // namespace otreg::analysis
