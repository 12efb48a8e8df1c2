#include "otreg/kernels/max_affine.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace otreg::kernels {

#ifndef OTREG_HAVE_AVX2
namespace avx2 {
// Unreachable: isa_available(Isa::Avx2) is false in this build.
ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n) {
  return scalar::argmax_affine(x, y, sx, sy, c, n);
}
std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out) {
  return scalar::collect_at_least(x, y, sx, sy, c, n, threshold, out);
}
}  // namespace avx2
#endif

namespace {

Isa detect() {
  if (const char* env = std::getenv("OTREG_SIMD"); env != nullptr && std::string(env) == "scalar")
    return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(OTREG_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n) {
  if (active_isa() == Isa::Avx2) return avx2::argmax_affine(x, y, sx, sy, c, n);
  return scalar::argmax_affine(x, y, sx, sy, c, n);
}

std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out) {
  if (active_isa() == Isa::Avx2) return avx2::collect_at_least(x, y, sx, sy, c, n, threshold, out);
  return scalar::collect_at_least(x, y, sx, sy, c, n, threshold, out);
}

}  // namespace otreg::kernels
