#include "doctest.h"

#include "otreg/kernels/max_affine.hpp"
#include "otreg/ot/piece_index.hpp"

#include <random>
#include <vector>

using namespace otreg;
using namespace otreg::kernels;

namespace {

struct Pieces {
  std::vector<double> sx, sy, c;
};

Pieces random_pieces(std::mt19937_64& rng, std::size_t n, bool with_ties) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Pieces p;
  for (std::size_t i = 0; i < n; ++i) {
    if (with_ties && i > 0 && i % 3 == 0) {
      // exact duplicate of an earlier piece: ties must go to the lower index
      const std::size_t j = i / 2;
      p.sx.push_back(p.sx[j]);
      p.sy.push_back(p.sy[j]);
      p.c.push_back(p.c[j]);
      continue;
    }
    p.sx.push_back(u(rng));
    p.sy.push_back(u(rng));
    p.c.push_back(u(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("scalar argmax matches a direct loop") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u, 5u, 31u, 100u}) {
    const Pieces p = random_pieces(rng, n, true);
    for (int t = 0; t < 50; ++t) {
      const double x = u(rng), y = u(rng);
      double best = -1e300;
      std::uint32_t arg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = (x * p.sx[i] + y * p.sy[i]) - p.c[i];
        if (v > best) {
          best = v;
          arg = static_cast<std::uint32_t>(i);
        }
      }
      const ArgMax r = scalar::argmax_affine(x, y, p.sx.data(), p.sy.data(), p.c.data(), n);
      CHECK(r.value == best);
      CHECK(r.index == arg);
    }
  }
}

TEST_CASE("SIMD variants agree bit for bit with scalar") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 not available; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 1; n <= 70; ++n) {
    const Pieces p = random_pieces(rng, n, n % 2 == 0);
    for (int t = 0; t < 20; ++t) {
      const double x = u(rng), y = u(rng);
      const ArgMax a = scalar::argmax_affine(x, y, p.sx.data(), p.sy.data(), p.c.data(), n);
      const ArgMax b = avx2::argmax_affine(x, y, p.sx.data(), p.sy.data(), p.c.data(), n);
      CHECK(a.value == b.value);
      CHECK(a.index == b.index);
      const double thr = a.value - 0.5;
      std::vector<std::uint32_t> oa(n), ob(n);
      const std::size_t ka = scalar::collect_at_least(x, y, p.sx.data(), p.sy.data(), p.c.data(), n, thr, oa.data());
      const std::size_t kb = avx2::collect_at_least(x, y, p.sx.data(), p.sy.data(), p.c.data(), n, thr, ob.data());
      REQUIRE(ka == kb);
      for (std::size_t k = 0; k < ka; ++k) CHECK(oa[k] == ob[k]);
    }
  }
}

TEST_CASE("dispatch can be pinned and reset") {
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  reset_isa();
  if (isa_available(Isa::Avx2)) {
    force_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
  } else {
    CHECK_THROWS(force_isa(Isa::Avx2));
  }
  reset_isa();
}

TEST_CASE("piece index matches brute force") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n : {1u, 7u, 33u, 500u, 3000u}) {
    const Pieces p = random_pieces(rng, n, false);
    const ot::PieceIndex index(p.sx, p.sy, p.c);
    for (int t = 0; t < 200; ++t) {
      const Vec2 x(u(rng), u(rng));
      const ArgMax ref = scalar::argmax_affine(x.x(), x.y(), p.sx.data(), p.sy.data(), p.c.data(), n);
      const ArgMax got = index.argmax(x);
      CHECK(got.value == ref.value);
      CHECK(got.index == ref.index);
      std::vector<std::uint32_t> all(n), sel;
      const std::size_t k =
          scalar::collect_at_least(x.x(), x.y(), p.sx.data(), p.sy.data(), p.c.data(), n, ref.value - 1.0, all.data());
      index.collect_at_least(x, ref.value - 1.0, sel);
      REQUIRE(sel.size() == k);
      for (std::size_t i = 0; i < k; ++i) CHECK(sel[i] == all[i]);
    }
  }
}

TEST_CASE("piece index on transport-like pieces matches brute force") {
  // Intercepts of a smooth convex conjugate: the index whitens them.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0), noise(-1e-3, 1e-3);
  for (std::size_t n : {50u, 2000u}) {
    Pieces p;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 2.0 * u(rng), b = 0.5 * u(rng);
      p.sx.push_back(a);
      p.sy.push_back(b);
      p.c.push_back(0.25 * a * a + b * b + 0.3 * a - 0.1 * b + noise(rng));
    }
    const ot::PieceIndex index(p.sx, p.sy, p.c);
    for (int t = 0; t < 500; ++t) {
      const Vec2 x(1.5 * u(rng) - 0.25, 1.5 * u(rng) - 0.25);
      const ArgMax ref = scalar::argmax_affine(x.x(), x.y(), p.sx.data(), p.sy.data(), p.c.data(), n);
      const ArgMax got = index.argmax(x);
      CHECK(got.value == ref.value);
      CHECK(got.index == ref.index);
      std::vector<std::uint32_t> all(n), sel;
      const std::size_t k =
          scalar::collect_at_least(x.x(), x.y(), p.sx.data(), p.sy.data(), p.c.data(), n, ref.value - 0.01, all.data());
      index.collect_at_least(x, ref.value - 0.01, sel);
      REQUIRE(sel.size() == k);
      for (std::size_t i = 0; i < k; ++i) CHECK(sel[i] == all[i]);
    }
  }
}
