#include "pairscatter/kernels.hpp"

#if defined(PAIRSCATTER_BUILD_AVX2)
#include <immintrin.h>

namespace pairscatter::kernels {

namespace {

// Two complex doubles per register: [ar0 ai0 ar1 ai1].
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);         // br0 br0 br1 br1
  const __m256d b_im = _mm256_permute_pd(b, 0xF);    // bi0 bi0 bi1 bi1
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);    // ai0 ar0 ai1 ar1
  const __m256d t1 = _mm256_mul_pd(a, b_re);         // ar*br  ai*br
  const __m256d t2 = _mm256_mul_pd(a_sw, b_im);      // ai*bi  ar*bi
  return _mm256_addsub_pd(t1, t2);                   // ar*br-ai*bi  ai*br+ar*bi
}

// |a|^2 for four complex values packed in two registers, returned in
// element order.
inline __m256d abs2_4(__m256d lo, __m256d hi) {
  const __m256d l2 = _mm256_mul_pd(lo, lo);
  const __m256d h2 = _mm256_mul_pd(hi, hi);
  const __m256d s = _mm256_hadd_pd(l2, h2);                // |a0| |a2| |a1| |a3|
  return _mm256_permute4x64_pd(s, _MM_SHUFFLE(3, 1, 2, 0));  // |a0| |a1| |a2| |a3|
}

inline void mul_parts(double ar, double ai, double br, double bi, double& re, double& im) {
  re = ar * br - ai * bi;
  im = ai * br + ar * bi;
}

void cmul_inplace(cplx* a, const cplx* b, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(pa + 2 * i, mul2(va, vb));
  }
  for (; i < n; ++i) {
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
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(pd + 2 * i, mul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
  }
  for (; i < n; ++i) {
    double re, im;
    mul_parts(pa[2 * i], pa[2 * i + 1], pb[2 * i], pb[2 * i + 1], re, im);
    pd[2 * i] = re;
    pd[2 * i + 1] = im;
  }
}

void csquare(cplx* dst, const cplx* src, std::size_t n) {
  auto* pd = reinterpret_cast<double*>(dst);
  const auto* ps = reinterpret_cast<const double*>(src);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(ps + 2 * i);
    _mm256_storeu_pd(pd + 2 * i, mul2(v, v));
  }
  for (; i < n; ++i) {
    double re, im;
    mul_parts(ps[2 * i], ps[2 * i + 1], ps[2 * i], ps[2 * i + 1], re, im);
    pd[2 * i] = re;
    pd[2 * i + 1] = im;
  }
}

void scale(cplx* a, double s, std::size_t n) {
  auto* pa = reinterpret_cast<double*>(a);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  const std::size_t len = 2 * n;
  for (; i + 4 <= len; i += 4) _mm256_storeu_pd(pa + i, _mm256_mul_pd(_mm256_loadu_pd(pa + i), vs));
  for (; i < len; ++i) pa[i] *= s;
}

void abs2_scaled(double* dst, const cplx* src, double s, std::size_t n) {
  const auto* ps = reinterpret_cast<const double*>(src);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = abs2_4(_mm256_loadu_pd(ps + 2 * i), _mm256_loadu_pd(ps + 2 * i + 4));
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(a, vs));
  }
  for (; i < n; ++i) dst[i] = (ps[2 * i] * ps[2 * i] + ps[2 * i + 1] * ps[2 * i + 1]) * s;
}

void welford_abs2(double* mean, double* m2, const cplx* src, double s, double inv_count,
                  std::size_t n) {
  const auto* ps = reinterpret_cast<const double*>(src);
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vinv = _mm256_set1_pd(inv_count);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x =
        _mm256_mul_pd(abs2_4(_mm256_loadu_pd(ps + 2 * i), _mm256_loadu_pd(ps + 2 * i + 4)), vs);
    __m256d mu = _mm256_loadu_pd(mean + i);
    const __m256d delta = _mm256_sub_pd(x, mu);
    mu = _mm256_add_pd(mu, _mm256_mul_pd(delta, vinv));
    const __m256d acc = _mm256_add_pd(_mm256_loadu_pd(m2 + i),
                                      _mm256_mul_pd(delta, _mm256_sub_pd(x, mu)));
    _mm256_storeu_pd(mean + i, mu);
    _mm256_storeu_pd(m2 + i, acc);
  }
  for (; i < n; ++i) {
    const double x = (ps[2 * i] * ps[2 * i] + ps[2 * i + 1] * ps[2 * i + 1]) * s;
    const double delta = x - mean[i];
    mean[i] += delta * inv_count;
    m2[i] += delta * (x - mean[i]);
  }
}

double sum_abs2(const cplx* a, std::size_t n) {
  const auto* pa = reinterpret_cast<const double*>(a);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = _mm256_loadu_pd(pa + 2 * i);
    const __m256d hi = _mm256_loadu_pd(pa + 2 * i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(lo, lo));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(hi, hi));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += pa[2 * i] * pa[2 * i] + pa[2 * i + 1] * pa[2 * i + 1];
  return total;
}

constexpr KernelTable kAvx2{cmul_inplace, cmul, csquare, scale, abs2_scaled, welford_abs2, sum_abs2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace pairscatter::kernels

#else

namespace pairscatter::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pairscatter::kernels

#endif
