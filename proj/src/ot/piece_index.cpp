#include "otreg/ot/piece_index.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace otreg::ot {

namespace {

// Least-squares fit c ~ s'Ps/2 + q.s + r. Returns false unless P is
// positive definite and reasonably conditioned.
bool fit_quadratic(std::span<const double> sx, std::span<const double> sy, std::span<const double> c, Mat2& p,
                   Vec2& q) {
  const std::size_t n = sx.size();
  if (n < 12) return false;
  Vec2 mean = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) mean += Vec2(sx[i], sy[i]);
  mean /= static_cast<double>(n);
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, (Vec2(sx[i], sy[i]) - mean).norm());
  if (!(spread > 0.0)) return false;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 6);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (sx[i] - mean.x()) / spread, v = (sy[i] - mean.y()) / spread;
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 0.5 * u * u;
    a(r, 1) = u * v;
    a(r, 2) = 0.5 * v * v;
    a(r, 3) = u;
    a(r, 4) = v;
    a(r, 5) = 1.0;
    b[r] = c[i];
  }
  const Eigen::VectorXd f = a.colPivHouseholderQr().solve(b);
  if (!f.allFinite()) return false;
  Mat2 pu;
  pu << f[0], f[1], f[1], f[2];
  const SymEigen2 e = sym_eig2(pu);
  if (!(e.small > 0.0) || e.large > 1e8 * e.small) return false;
  // Back to s: u = (s - mean) / spread.
  p = pu / (spread * spread);
  q = Vec2(f[3], f[4]) / spread - p * mean;
  return q.allFinite();
}

}  // namespace

PieceIndex::PieceIndex(std::span<const double> sx, std::span<const double> sy, std::span<const double> c) {
  if (sx.size() != sy.size() || sx.size() != c.size()) throw std::invalid_argument("piece arrays differ in length");
  if (sx.empty()) return;
  const std::size_t n = sx.size();
  ox_.assign(sx.begin(), sx.end());
  oy_.assign(sy.begin(), sy.end());
  oc_.assign(c.begin(), c.end());

  std::vector<double> tx(sx.begin(), sx.end()), ty(sy.begin(), sy.end()), tc(c.begin(), c.end());
  Mat2 p;
  Vec2 q;
  if (fit_quadratic(sx, sy, c, p, q)) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(p);
    const Mat2 r = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    r_inv_ = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
    shift_ = q;
    whitened_ = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 t = r * Vec2(sx[i], sy[i]);
      tx[i] = t.x();
      ty[i] = t.y();
      tc[i] = c[i] - (q.x() * sx[i] + q.y() * sy[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    max_t2_ = std::max(max_t2_, tx[i] * tx[i] + ty[i] * ty[i]);
    max_abs_c_ = std::max({max_abs_c_, std::abs(tc[i]), std::abs(c[i])});
    max_s2_ = std::max(max_s2_, sx[i] * sx[i] + sy[i] * sy[i]);
  }

  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0u);
  nodes_.reserve(2 * n / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(n), tx, ty, tc);
  sx_.resize(n);
  sy_.resize(n);
  c_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    sx_[k] = tx[perm_[k]];
    sy_[k] = ty[perm_[k]];
    c_[k] = tc[perm_[k]];
  }
}

double PieceIndex::slack(const Vec2& x, const Vec2& z) const {
  if (!whitened_) return 0.0;
  return 1e-12 * (1.0 + z.squaredNorm() + max_t2_ + x.squaredNorm() + max_s2_ + max_abs_c_);
}

std::int32_t PieceIndex::build(std::uint32_t begin, std::uint32_t end, std::span<const double> sx,
                               std::span<const double> sy, std::span<const double> c) {
  Node node{};
  node.min_x = node.min_y = node.min_c = std::numeric_limits<double>::infinity();
  node.max_x = node.max_y = node.max_w = -std::numeric_limits<double>::infinity();
  double max_s2 = 0.0;
  for (std::uint32_t k = begin; k < end; ++k) {
    const std::uint32_t i = perm_[k];
    node.min_x = std::min(node.min_x, sx[i]);
    node.max_x = std::max(node.max_x, sx[i]);
    node.min_y = std::min(node.min_y, sy[i]);
    node.max_y = std::max(node.max_y, sy[i]);
    node.min_c = std::min(node.min_c, c[i]);
    const double s2 = sx[i] * sx[i] + sy[i] * sy[i];
    node.max_w = std::max(node.max_w, s2 - 2.0 * c[i]);
    max_s2 = std::max(max_s2, s2);
  }
  node.magnitude = max_s2 + std::abs(node.max_w);
  node.begin = begin;
  node.end = end;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  const bool split_x = (node.max_x - node.min_x) >= (node.max_y - node.min_y);
  const std::span<const double> key = split_x ? sx : sy;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b] || (key[a] == key[b] && a < b); });
  const std::int32_t left = build(begin, mid, sx, sy, c);
  const std::int32_t right = build(mid, end, sx, sy, c);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

kernels::ArgMax PieceIndex::search(const Vec2& z) const {
  kernels::ArgMax best{-std::numeric_limits<double>::infinity(), 0};
  const double px = z.x(), py = z.y();
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (upper_bound(node, px, py) <= best.value) continue;
    if (node.left < 0) {
      const kernels::ArgMax leaf = kernels::argmax_affine(px, py, sx_.data() + node.begin, sy_.data() + node.begin,
                                                          c_.data() + node.begin, node.end - node.begin);
      if (leaf.value > best.value) best = {leaf.value, perm_[node.begin + leaf.index]};
      continue;
    }
    const Node& l = nodes_[static_cast<std::size_t>(node.left)];
    const Node& r = nodes_[static_cast<std::size_t>(node.right)];
    // Visit the more promising child first.
    if (upper_bound(l, px, py) >= upper_bound(r, px, py)) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return best;
}

void PieceIndex::gather(const Vec2& z, double threshold, std::vector<std::uint32_t>& out) const {
  const double px = z.x(), py = z.y();
  std::uint32_t buf[kLeafSize];
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (upper_bound(node, px, py) < threshold) continue;
    if (node.left < 0) {
      const std::size_t cnt = kernels::collect_at_least(px, py, sx_.data() + node.begin, sy_.data() + node.begin,
                                                        c_.data() + node.begin, node.end - node.begin, threshold, buf);
      for (std::size_t k = 0; k < cnt; ++k) out.push_back(perm_[node.begin + buf[k]]);
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.left;
  }
}

kernels::ArgMax PieceIndex::argmax(const Vec2& x) const {
  if (nodes_.empty()) return {-std::numeric_limits<double>::infinity(), 0};
  if (!whitened_) return search(x);
  const Vec2 z = whiten(x);
  const kernels::ArgMax approx = search(z);
  // Near-ties in whitened values are settled in original coordinates.
  thread_local std::vector<std::uint32_t> cand;
  cand.clear();
  gather(z, approx.value - 2.0 * slack(x, z), cand);
  kernels::ArgMax best{original_value(approx.index, x), approx.index};
  for (std::uint32_t i : cand) {
    const double v = original_value(i, x);
    if (v > best.value || (v == best.value && i < best.index)) best = {v, i};
  }
  return best;
}

void PieceIndex::collect_at_least(const Vec2& x, double threshold, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (nodes_.empty()) return;
  if (!whitened_) {
    gather(x, threshold, out);
  } else {
    const Vec2 z = whiten(x);
    thread_local std::vector<std::uint32_t> cand;
    cand.clear();
    gather(z, threshold - slack(x, z), cand);
    for (std::uint32_t i : cand)
      if (original_value(i, x) >= threshold) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace otreg::ot
