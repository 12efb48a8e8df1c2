#pragma once

// Inner loops over the affine pieces of a piecewise-linear potential,
//
//     value_i(x) = x * sx[i] + y * sy[i] - c[i],
//
// in a scalar reference version and SIMD variants. All variants evaluate
// the same expression tree without contraction, so they agree bit for bit;
// the dispatcher picks the widest instruction set the CPU supports.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace otreg::kernels {

struct ArgMax {
  double value;
  std::uint32_t index;  // lowest index attaining the maximum
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
/// Instruction set used by the dispatched entry points.
Isa active_isa();
/// Pin the dispatcher to a specific variant (tests, benchmarks). Throws
/// std::invalid_argument if the CPU lacks it.
void force_isa(Isa isa);
/// Restore automatic selection. OTREG_SIMD=scalar in the environment
/// disables SIMD variants.
void reset_isa();

/// max_i value_i(x, y) over n >= 1 pieces.
ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n);

/// Writes, in increasing order, every i with value_i(x, y) >= threshold;
/// returns the count. `out` must hold n entries.
std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out);

namespace scalar {
ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n);
std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out);
}  // namespace scalar

namespace avx2 {
ArgMax argmax_affine(double x, double y, const double* sx, const double* sy, const double* c,
                     std::size_t n);
std::size_t collect_at_least(double x, double y, const double* sx, const double* sy, const double* c,
                             std::size_t n, double threshold, std::uint32_t* out);
}  // namespace avx2

}  // namespace otreg::kernels
