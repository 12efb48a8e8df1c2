#include "otreg/kernels/max_affine.hpp"

#include <immintrin.h>

#include <limits>

namespace otreg::kernels::avx2 {

namespace {

inline __m256d piece_values(__m256d x, __m256d y, const double* sx, const double* sy, const double* c) {
  const __m256d px = _mm256_mul_pd(x, _mm256_loadu_pd(sx));
  const __m256d py = _mm256_mul_pd(y, _mm256_loadu_pd(sy));
  return _mm256_sub_pd(_mm256_add_pd(px, py), _mm256_loadu_pd(c));
}

}  // namespace

ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = piece_values(vx, vy, sx + i, sy + i, c + i);
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
    idx = _mm256_add_pd(idx, four);
  }

  alignas(32) double lane_val[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_val, best);
  _mm256_store_pd(lane_idx, best_idx);
  ArgMax out{lane_val[0], static_cast<std::uint32_t>(lane_idx[0])};
  for (int l = 1; l < 4; ++l) {
    const auto li = static_cast<std::uint32_t>(lane_idx[l]);
    if (lane_val[l] > out.value || (lane_val[l] == out.value && li < out.index)) out = {lane_val[l], li};
  }
  for (; i < n; ++i) {
    const double v = (x * sx[i] + y * sy[i]) - c[i];
    if (v > out.value) out = {v, static_cast<std::uint32_t>(i)};
  }
  return out;
}

std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = piece_values(vx, vy, sx + i, sy + i, c + i);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, thr, _CMP_GE_OQ));
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      out[count++] = static_cast<std::uint32_t>(i + static_cast<std::size_t>(lane));
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    const double v = (x * sx[i] + y * sy[i]) - c[i];
    if (v >= threshold) out[count++] = static_cast<std::uint32_t>(i);
  }
  return count;
}

}  // namespace otreg::kernels::avx2
