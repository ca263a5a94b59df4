#pragma once

// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active
// table is chosen once at startup from the CPU's capabilities.
//
// Elementwise kernels are bit-identical across variants (no FMA, same
// operation order). Reductions (sum_abs2) agree to rounding only.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace pairscatter::kernels {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  // a[i] *= b[i]
  void (*cmul_inplace)(cplx* a, const cplx* b, std::size_t n);
  // dst[i] = a[i] * b[i]
  void (*cmul)(cplx* dst, const cplx* a, const cplx* b, std::size_t n);
  // dst[i] = src[i]^2
  void (*csquare)(cplx* dst, const cplx* src, std::size_t n);
  // a[i] *= s
  void (*scale)(cplx* a, double s, std::size_t n);
  // dst[i] = |src[i]|^2 * s
  void (*abs2_scaled)(double* dst, const cplx* src, double s, std::size_t n);
  // Welford update with sample x_i = |src[i]|^2 * s for the count-th sample:
  //   delta = x - mean; mean += delta * inv_count; m2 += delta * (x - mean)
  void (*welford_abs2)(double* mean, double* m2, const cplx* src, double s,
                       double inv_count, std::size_t n);
  // sum |a[i]|^2
  double (*sum_abs2)(const cplx* a, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_has_avx2();

// Table used by the rest of the library. Defaults to the best supported
// ISA; PAIRSCATTER_SIMD=scalar in the environment forces the reference path.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

// Span conveniences over the active table.
inline void cmul_inplace(std::span<cplx> a, std::span<const cplx> b) {
  active().cmul_inplace(a.data(), b.data(), a.size());
}
inline void csquare(std::span<cplx> dst, std::span<const cplx> src) {
  active().csquare(dst.data(), src.data(), src.size());
}
inline void scale(std::span<cplx> a, double s) { active().scale(a.data(), s, a.size()); }
inline double sum_abs2(std::span<const cplx> a) { return active().sum_abs2(a.data(), a.size()); }

}  // namespace pairscatter::kernels
