#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "pairscatter/kernels.hpp"

using namespace pairscatter;
using kernels::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

bool bit_equal(const cplx* a, const cplx* b, std::size_t n) {
  return std::memcmp(a, b, n * sizeof(cplx)) == 0;
}
bool bit_equal(const double* a, const double* b, std::size_t n) {
  return std::memcmp(a, b, n * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar reference kernels against std::complex") {
  const auto& s = kernels::scalar_table();
  for (std::size_t n : {0u, 1u, 7u, 64u}) {
    auto a = random_vector(n, 1), b = random_vector(n, 2);
    std::vector<cplx> out(n);
    s.cmul(out.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ref(a[i].real() * b[i].real() - a[i].imag() * b[i].imag(),
                     a[i].real() * b[i].imag() + a[i].imag() * b[i].real());
      CHECK(out[i] == ref);
    }
    std::vector<double> ab(n);
    s.abs2_scaled(ab.data(), a.data(), 0.5, n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ab[i] == doctest::Approx(0.5 * std::norm(a[i])));
      total += std::norm(a[i]);
    }
    CHECK(s.sum_abs2(a.data(), n) == doctest::Approx(total));
  }
}

TEST_CASE("SIMD variants are bit-identical to the scalar reference") {
  const auto* v = kernels::avx2_table();
  if (v == nullptr || !kernels::cpu_has_avx2()) {
    MESSAGE("AVX2 variant unavailable on this host; equivalence not exercised");
    return;
  }
  const auto& s = kernels::scalar_table();
  // Odd lengths and offsets exercise the tails and unaligned starts.
  for (std::size_t n : {1u, 2u, 3u, 5u, 17u, 31u, 1000u, 4099u}) {
    for (std::size_t off : {0u, 1u}) {
      const auto a0 = random_vector(n + off, 10 + n), b0 = random_vector(n + off, 20 + n);
      const cplx* a = a0.data() + off;
      const cplx* b = b0.data() + off;

      std::vector<cplx> r1(n), r2(n);
      s.cmul(r1.data(), a, b, n);
      v->cmul(r2.data(), a, b, n);
      CHECK(bit_equal(r1.data(), r2.data(), n));

      std::vector<cplx> i1(a, a + n), i2(a, a + n);
      s.cmul_inplace(i1.data(), b, n);
      v->cmul_inplace(i2.data(), b, n);
      CHECK(bit_equal(i1.data(), i2.data(), n));

      s.csquare(r1.data(), a, n);
      v->csquare(r2.data(), a, n);
      CHECK(bit_equal(r1.data(), r2.data(), n));

      i1.assign(a, a + n);
      i2.assign(a, a + n);
      s.scale(i1.data(), 0.37, n);
      v->scale(i2.data(), 0.37, n);
      CHECK(bit_equal(i1.data(), i2.data(), n));

      std::vector<double> d1(n), d2(n);
      s.abs2_scaled(d1.data(), a, 1.0 / 3.0, n);
      v->abs2_scaled(d2.data(), a, 1.0 / 3.0, n);
      CHECK(bit_equal(d1.data(), d2.data(), n));

      std::vector<double> m1(n, 0.0), q1(n, 0.0), m2(n, 0.0), q2(n, 0.0);
      for (int c = 1; c <= 3; ++c) {
        const auto src = random_vector(n, 100 + c);
        s.welford_abs2(m1.data(), q1.data(), src.data(), 0.25, 1.0 / c, n);
        v->welford_abs2(m2.data(), q2.data(), src.data(), 0.25, 1.0 / c, n);
      }
      CHECK(bit_equal(m1.data(), m2.data(), n));
      CHECK(bit_equal(q1.data(), q2.data(), n));

      const double s1 = s.sum_abs2(a, n), s2 = v->sum_abs2(a, n);
      CHECK(std::abs(s1 - s2) <= 1e-13 * s1);
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const auto isa = kernels::active_isa();
  CHECK((isa == kernels::Isa::kScalar || isa == kernels::Isa::kAvx2));
  CHECK_FALSE(kernels::isa_name(isa).empty());
  if (isa == kernels::Isa::kScalar) CHECK(&kernels::active() == &kernels::scalar_table());
}
