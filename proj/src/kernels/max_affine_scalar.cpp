#include "otreg/kernels/max_affine.hpp"

#include <limits>

namespace otreg::kernels::scalar {

ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n) {
  ArgMax best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (x * sx[i] + y * sy[i]) - c[i];
    if (v > best.value) best = {v, static_cast<std::uint32_t>(i)};
  }
  return best;
}

std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (x * sx[i] + y * sy[i]) - c[i];
    if (v >= threshold) out[count++] = static_cast<std::uint32_t>(i);
  }
  return count;
}

}  // namespace otreg::kernels::scalar
