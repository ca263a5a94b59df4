#include "pairscatter/kernels.hpp"

namespace pairscatter::kernels {

namespace {

// Real and imaginary parts are written out instead of using std::complex's
// operator*, which routes through __muldc3 and differs from the SIMD path.
inline void mul_parts(double ar, double ai, double br, double bi, double& re, double& im) {
  re = ar * br - ai * bi;
  im = ai * br + ar * bi;
}

void cmul_inplace(cplx* a, const cplx* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    mul_parts(pa[2 * i], pa[2 * i + 1], pb[2 * i], pb[2 * i + 1], re, im);
    pa[2 * i] = re;
    pa[2 * i + 1] = im;
  }
}

void cmul(cplx* dst, const cplx* a, const cplx* b, std::size_t n) {
  auto* pd = reinterpret_cast<double*>(dst);
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    mul_parts(pa[2 * i], pa[2 * i + 1], pb[2 * i], pb[2 * i + 1], re, im);
    pd[2 * i] = re;
    pd[2 * i + 1] = im;
  }
}

void csquare(cplx* dst, const cplx* src, std::size_t n) {
  auto* pd = reinterpret_cast<double*>(dst);
  const auto* ps = reinterpret_cast<const double*>(src);
  for (std::size_t i = 0; i < n; ++i) {
    double re, im;
    mul_parts(ps[2 * i], ps[2 * i + 1], ps[2 * i], ps[2 * i + 1], re, im);
    pd[2 * i] = re;
    pd[2 * i + 1] = im;
  }
}

void scale(cplx* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  for (std::size_t i = 0; i < 2 * n; ++i) pa[i] *= s;
}

inline double abs2(const double* p) { return (p[0] * p[0] + p[1] * p[1]); }

void abs2_scaled(double* dst, const cplx* src, double s, std::size_t n) {
  const auto* ps = reinterpret_cast<const double*>(src);
  for (std::size_t i = 0; i < n; ++i) dst[i] = abs2(ps + 2 * i) * s;
}

void welford_abs2(double* mean, double* m2, const cplx* src, double s, double inv_count,
                  std::size_t n) {
  const auto* ps = reinterpret_cast<const double*>(src);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = abs2(ps + 2 * i) * s;
    const double delta = x - mean[i];
    mean[i] += delta * inv_count;
    m2[i] += delta * (x - mean[i]);
  }
}

double sum_abs2(const cplx* a, std::size_t n) {
  const auto* pa = reinterpret_cast<const double*>(a);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += abs2(pa + 2 * i);
  return acc;
}

constexpr KernelTable kScalar{cmul_inplace, cmul, csquare, scale, abs2_scaled, welford_abs2, sum_abs2};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace pairscatter::kernels
