#include "otreg/geometry/polygon.hpp"

#include "otreg/error.hpp"
#include "otreg/geometry/affine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otreg {

SymEigen2 sym_eig2(const Mat2& m) {
  const double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), d = m(1, 1);
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double rad = std::hypot(half_diff, b);
  SymEigen2 out{mean - rad, mean + rad, Vec2(1.0, 0.0)};
  if (rad <= 1e-15 * (std::abs(mean) + 1e-300)) return out;
  // Eigenvector of the larger eigenvalue, from the better-conditioned row.
  Vec2 e = half_diff >= 0.0 ? Vec2(half_diff + rad, b) : Vec2(b, rad - half_diff);
  e.normalize();
  if (e.x() < 0.0 || (e.x() == 0.0 && e.y() < 0.0)) e = -e;
  out.e_large = e;
  return out;
}

double operator_norm(const Mat2& m) {
  const SymEigen2 eig = sym_eig2(m.transpose() * m);
  return std::sqrt(std::max(eig.large, 0.0));
}

double polygon_signed_area(std::span<const Vec2> v) {
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  const Vec2 o = v[0];
  double s = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) s += cross(v[k] - o, v[k + 1] - o);
  return 0.5 * s;
}

Vec2 polygon_centroid(std::span<const Vec2> v) {
  const std::size_t n = v.size();
  const Vec2 o = v[0];
  double a2 = 0.0;
  Vec2 acc(0.0, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Vec2 p = v[k] - o, q = v[k + 1] - o;
    const double cr = cross(p, q);
    a2 += cr;
    acc += cr * (p + q);
  }
  if (a2 == 0.0) return o;
  return o + acc / (3.0 * a2);
}

namespace {

double max_pairwise_distance(const std::vector<Vec2>& v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) d2 = std::max(d2, (v[i] - v[j]).squaredNorm());
  return std::sqrt(d2);
}

// Returns an empty vector for degenerate input, throws on non-convex input.
std::vector<Vec2> canonicalize(std::vector<Vec2> v, bool throw_nonconvex) {
  if (v.size() < 3) return {};
  for (const Vec2& p : v)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw GeometryError("polygon vertex is not finite");
  if (polygon_signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  const double diam = max_pairwise_distance(v);
  if (diam <= 0.0) return {};
  const double dup_tol = 1e-12 * diam;
  const double col_tol = 1e-12 * diam * diam;

  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    std::vector<Vec2> w;
    w.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Vec2& p = v[k];
      if (!w.empty() && (p - w.back()).norm() <= dup_tol) {
        changed = true;
        continue;
      }
      w.push_back(p);
    }
    while (w.size() >= 2 && (w.front() - w.back()).norm() <= dup_tol) {
      w.pop_back();
      changed = true;
    }
    v.swap(w);
    if (v.size() < 3) break;

    const std::size_t n = v.size();
    std::vector<char> keep(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2& prev = v[(k + n - 1) % n];
      const Vec2& next = v[(k + 1) % n];
      const double cr = cross(v[k] - prev, next - v[k]);
      if (std::abs(cr) <= col_tol) {
        keep[k] = 0;
        changed = true;
        break;  // remove one at a time so neighbours are re-evaluated
      }
    }
    if (changed) {
      std::vector<Vec2> w2;
      for (std::size_t k = 0; k < n; ++k)
        if (keep[k]) w2.push_back(v[k]);
      v.swap(w2);
    }
  }
  if (v.size() < 3) return {};
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double cr = cross(v[k] - v[(k + n - 1) % n], v[(k + 1) % n] - v[k]);
    if (cr < 0.0) {
      if (throw_nonconvex) throw GeometryError("polygon is not convex");
      return {};
    }
  }
  if (polygon_signed_area(v) <= 1e-14 * diam * diam) return {};
  return v;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
  v_ = canonicalize(std::move(vertices), true);
  if (v_.empty()) throw GeometryError("degenerate polygon");
  area_ = polygon_signed_area(v_);
  diam_ = max_pairwise_distance(v_);
}

ConvexPolygon::ConvexPolygon(Validated, std::vector<Vec2> v) : v_(std::move(v)) {
  area_ = polygon_signed_area(v_);
  diam_ = max_pairwise_distance(v_);
}

std::optional<ConvexPolygon> ConvexPolygon::try_make(std::vector<Vec2> vertices) {
  std::vector<Vec2> v = canonicalize(std::move(vertices), false);
  if (v.empty()) return std::nullopt;
  return ConvexPolygon(Validated{}, std::move(v));
}

ConvexPolygon ConvexPolygon::hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw GeometryError("hull of fewer than three distinct points");
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const Vec2& p = pts[i];
    while (k >= t && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0.0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  return ConvexPolygon(std::move(h));
}

ConvexPolygon ConvexPolygon::box(const Vec2& lo, const Vec2& hi) {
  return ConvexPolygon({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
}

double ConvexPolygon::perimeter() const {
  double s = 0.0;
  for (std::size_t k = 0; k < v_.size(); ++k) s += edge(k).norm();
  return s;
}

Vec2 ConvexPolygon::centroid() const { return polygon_centroid(v_); }

Mat2 ConvexPolygon::covariance() const {
  // Second moments about a nearby origin, then shifted to the centroid.
  const Vec2 o = centroid();
  const std::size_t n = v_.size();
  double a2 = 0.0, ixx = 0.0, iyy = 0.0, ixy = 0.0;
  Vec2 first(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 p = v_[k] - o, q = vertex(k + 1) - o;
    const double cr = cross(p, q);
    a2 += cr;
    first += cr * (p + q);
    ixx += cr * (p.x() * p.x() + p.x() * q.x() + q.x() * q.x());
    iyy += cr * (p.y() * p.y() + p.y() * q.y() + q.y() * q.y());
    ixy += cr * (p.x() * q.y() + 2.0 * p.x() * p.y() + 2.0 * q.x() * q.y() + q.x() * p.y());
  }
  const double area = 0.5 * a2;
  const Vec2 m = first / (3.0 * a2);  // residual centroid offset, ~0
  Mat2 c;
  c(0, 0) = ixx / 12.0 / area - m.x() * m.x();
  c(1, 1) = iyy / 12.0 / area - m.y() * m.y();
  c(0, 1) = c(1, 0) = ixy / 24.0 / area - m.x() * m.y();
  return c;
}

std::pair<Vec2, Vec2> ConvexPolygon::bbox() const {
  Vec2 lo = v_[0], hi = v_[0];
  for (const Vec2& p : v_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

bool ConvexPolygon::contains(const Vec2& x, double tol_rel) const {
  const double tol = tol_rel * diam_;
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const Vec2 e = edge(k);
    if (cross(e, x - v_[k]) < -tol * e.norm()) return false;
  }
  return true;
}

bool ConvexPolygon::contains(const ConvexPolygon& other, double tol_rel) const {
  const double tol = tol_rel * std::max(diam_, other.diam_);
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const Vec2 e = edge(k);
    const double len = e.norm();
    for (const Vec2& p : other.v_)
      if (cross(e, p - v_[k]) < -tol * len) return false;
  }
  return true;
}

BoundaryPoint ConvexPolygon::project_to_boundary(const Vec2& x) const {
  BoundaryPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  double arc = 0.0;
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const Vec2 e = edge(k);
    const double len2 = e.squaredNorm();
    const double t = std::clamp((x - v_[k]).dot(e) / len2, 0.0, 1.0);
    const Vec2 p = v_[k] + t * e;
    const double d = (x - p).norm();
    if (d < best.distance) {
      best = {p, k, t, arc + t * std::sqrt(len2), d};
    }
    arc += std::sqrt(len2);
  }
  return best;
}

double ConvexPolygon::signed_distance(const Vec2& x) const {
  const double d = project_to_boundary(x).distance;
  return contains(x, 0.0) ? -d : d;
}

BoundaryPoint ConvexPolygon::point_at_arc(double s) const {
  const double per = perimeter();
  s = std::fmod(s, per);
  if (s < 0.0) s += per;
  double arc = 0.0;
  for (std::size_t k = 0; k < v_.size(); ++k) {
    const double len = edge(k).norm();
    if (s <= arc + len || k + 1 == v_.size()) {
      const double t = std::clamp((s - arc) / len, 0.0, 1.0);
      return {v_[k] + t * edge(k), k, t, s, 0.0};
    }
    arc += len;
  }
  return {v_[0], 0, 0.0, 0.0, 0.0};
}

ConvexPolygon ConvexPolygon::transformed(const AffineMap& map) const {
  std::vector<Vec2> w;
  w.reserve(v_.size());
  for (const Vec2& p : v_) w.push_back(map(p));
  return ConvexPolygon(std::move(w));
}

ConvexPolygon ConvexPolygon::translated(const Vec2& shift) const {
  std::vector<Vec2> w = v_;
  for (Vec2& p : w) p += shift;
  return ConvexPolygon(Validated{}, std::move(w));
}

ConvexPolygon ConvexPolygon::dilated(const Vec2& c, double k) const {
  std::vector<Vec2> w = v_;
  for (Vec2& p : w) p = c + k * (p - c);
  return ConvexPolygon(std::move(w));
}

void clip_halfplane_raw(std::span<const Vec2> in, const Vec2& n, double c, double eps,
                        std::vector<Vec2>& out) {
  out.clear();
  const std::size_t m = in.size();
  if (m == 0) return;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2& p = in[k];
    const Vec2& q = in[(k + 1) % m];
    const double sp = n.dot(p) - c;
    const double sq = n.dot(q) - c;
    const bool pin = sp <= eps, qin = sq <= eps;
    if (pin) out.push_back(p);
    if (pin != qin && (sp > eps || sq > eps) && (sp < -eps || sq < -eps)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
}

std::optional<ConvexPolygon> clip_halfplane(const ConvexPolygon& p, const Vec2& n, double c) {
  std::vector<Vec2> out;
  const double eps = kGeomRelTol * p.diameter() * n.norm();
  clip_halfplane_raw(p.vertices(), n, c, eps, out);
  if (out.size() == p.size()) {
    bool same = true;
    for (std::size_t k = 0; k < out.size() && same; ++k) same = out[k] == p[k];
    if (same) return p;
  }
  return ConvexPolygon::try_make(std::move(out));
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  std::vector<Vec2> cur = a.vertices(), next;
  const double eps_scale = kGeomRelTol * std::max(a.diameter(), b.diameter());
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Vec2 e = b.edge(k);
    const Vec2 n(e.y(), -e.x());  // outward normal for a CCW loop
    clip_halfplane_raw(cur, n, n.dot(b[k]), eps_scale * n.norm(), next);
    cur.swap(next);
    if (cur.size() < 3) return std::nullopt;
  }
  return ConvexPolygon::try_make(std::move(cur));
}

InscribedDisk largest_inscribed_disk(const ConvexPolygon& p) {
  const std::size_t m = p.size();
  std::vector<Vec2> normals(m);
  std::vector<double> offsets(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2 e = p.edge(k);
    normals[k] = Vec2(e.y(), -e.x()).normalized();
    offsets[k] = normals[k].dot(p[k]);
  }
  auto shrunk = [&](double r, std::vector<Vec2>& cur) {
    std::vector<Vec2> next;
    cur = p.vertices();
    for (std::size_t k = 0; k < m && cur.size() >= 3; ++k) {
      clip_halfplane_raw(cur, normals[k], offsets[k] - r, 0.0, next);
      cur.swap(next);
    }
    return cur.size() >= 3 && polygon_signed_area(cur) > 0.0;
  };
  double lo = 0.0, hi = 0.5 * p.diameter();
  std::vector<Vec2> region;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shrunk(mid, region))
      lo = mid;
    else
      hi = mid;
  }
  Vec2 center = p.centroid();
  if (shrunk(lo, region)) center = polygon_centroid(region);
  return {center, lo};
}

}  // namespace otreg
