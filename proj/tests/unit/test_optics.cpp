#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pairscatter/config.hpp"
#include "pairscatter/diagnostics.hpp"
#include "pairscatter/error.hpp"
#include "pairscatter/fft.hpp"
#include "pairscatter/optics.hpp"
#include "pairscatter/seed.hpp"

using namespace pairscatter;

namespace {

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("FFT conventions") {
  const TransverseGrid g(1, 16, 1.0, 1.0);
  const FftPlan fft(g);
  ComplexField f(g);
  f[1] = 1.0;  // delta at index 1
  fft.forward(f);
  for (std::size_t j = 0; j < 16; ++j) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(j) / 16.0;
    CHECK(std::abs(f[j] - cplx(std::cos(a), std::sin(a))) < 1e-14);
  }
  fft.inverse(f);
  CHECK(std::abs(f[1] - cplx(16.0, 0.0)) < 1e-13);
}

TEST_CASE("Gaussian beam follows the analytic Fresnel solution") {
  // Exact paraxial solution for the kernel exp(+i q^2 s / 2 kappa):
  //   E(x, s) = (1 - i s/zR)^{-1/2} exp(-x^2 / (w^2 (1 - i s/zR))), zR = kappa w^2 / 2.
  const TransverseGrid g(1, 4096, 0.05, 1.0);
  const double w = 3.0, kappa = 2.0, zr = kappa * w * w / 2.0;
  ComplexField f(g);
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::exp(-g.position(i) * g.position(i) / (w * w));
  for (double s : {0.5 * zr, 2.0 * zr, 5.0 * zr}) {
    const ComplexField out = fresnel_propagate(f, s, kappa);
    ComplexField ref(g);
    const cplx c(1.0, -s / zr);
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double x = g.position(i);
      ref[i] = std::exp(-x * x / (w * w * c)) / std::sqrt(c);
    }
    CHECK(max_abs_diff(out, ref) < 1e-10);
  }
}

TEST_CASE("lattice plane waves are eigenmodes") {
  const TransverseGrid g(1, 256, 0.3, 1.0);
  const double kappa = 1.7, s = 12.5;
  for (std::size_t j : {0u, 3u, 100u, 200u}) {
    const double q = g.momentum(j);
    ComplexField f(g);
    for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::polar(1.0, q * g.position(i));
    const ComplexField out = fresnel_propagate(f, s, kappa);
    const cplx phase = std::polar(1.0, kFresnelSign * q * q * s / (2.0 * kappa));
    for (std::size_t i = 0; i < g.n(); i += 17) CHECK(std::abs(out[i] - f[i] * phase) < 1e-12);
  }
}

TEST_CASE("propagator unitarity, semigroup and inverse on random fields") {
  for (int dim : {1, 2}) {
    const TransverseGrid g(dim, dim == 1 ? 2048 : 64, 0.1, 1.0);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    ComplexField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = {n01(rng), n01(rng)};
    const double kappa = 1.0;
    const ComplexField ab = fresnel_propagate(fresnel_propagate(f, 3.0, kappa), 4.5, kappa);
    const ComplexField direct = fresnel_propagate(f, 7.5, kappa);
    const ComplexField back = fresnel_propagate(fresnel_propagate(f, 7.5, kappa), -7.5, kappa);
    CHECK(direct.norm2() == doctest::Approx(f.norm2()).epsilon(1e-12));
    CHECK(max_abs_diff(ab, direct) < 1e-11);
    CHECK(max_abs_diff(back, f) < 1e-11);
    CHECK(max_abs_diff(fresnel_propagate(f, 0.0, kappa), f) == 0.0);
  }
}

TEST_CASE("propagator self-check report at engine distances") {
  DimensionlessSetup s;
  s.n = 1 << 14;
  s.kd = 800;
  const auto c = make_config(s);
  const auto r = check_propagator(c.grid, 1.0, 10.0 * c.diffuser.xi0(), c.geometry.d());
  CHECK(r.norm_drift < 1e-10);
  CHECK(r.semigroup_error < 1e-10);
  CHECK(r.inverse_error < 1e-10);
  CHECK(r.width_error < 5e-3);
  CHECK(r.rayleigh_lengths >= 3.0);
}

TEST_CASE("propagator rejects bad wavenumber") {
  const TransverseGrid g(1, 16, 1.0, 1.0);
  CHECK_THROWS_AS(FresnelKernel(g, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(fresnel_propagate(ComplexField(g), 1.0, -1.0), ConfigError);
}

TEST_CASE("diffuser masks are deterministic in the seed") {
  const DiffuserSpec spec(0.5, 1.0);
  const TransverseGrid g(1, 1024, spec.xi0() / 4, 1.0);
  const auto a = synthesize_diffuser(g, spec, 77);
  const auto b = synthesize_diffuser(g, spec, 77);
  const auto c = synthesize_diffuser(g, spec, 78);
  CHECK(max_abs_diff(a.at_omega, b.at_omega) == 0.0);
  CHECK(max_abs_diff(a.at_omega, c.at_omega) > 0.1);
  CHECK(a.realization_seed == 77);
}

TEST_CASE("diffuser spectrum is confined to the Gaussian filter") {
  const DiffuserSpec spec(0.5, 1.0);
  const TransverseGrid g(1, 1024, spec.xi0() / 4, 1.0);
  const DiffuserSynthesizer syn(g, spec);
  CplxVector sp(g.size());
  double inside = 0.0, total = 0.0;
  const int draws = 200;
  std::vector<double> power(g.size(), 0.0);
  for (int r = 0; r < draws; ++r) {
    syn.spectrum(realization_seed(3, r), sp);
    for (std::size_t j = 0; j < sp.size(); ++j) power[j] += std::norm(sp[j]) / draws;
  }
  // Ensemble power follows exp(-q^2 xi0^2) within sampling noise (about
  // 1/sqrt(draws) per bin) near the centre.
  const double p0 = power[0];
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double q = g.momentum(j);
    const double expect = std::exp(-q * q * spec.xi0() * spec.xi0());
    total += power[j];
    if (std::abs(q) * spec.xi0() < 2.0) inside += power[j];
    if (expect > 0.3) CHECK(power[j] / p0 == doctest::Approx(expect).epsilon(0.35));
  }
  CHECK(inside / total > 0.99);
  CHECK(total == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("mask correlations at omega and 2 omega") {
  const DiffuserSpec spec(0.56, 1.0);
  const TransverseGrid g(1, 4096, spec.xi0() / 4, 1.0);
  const auto m = estimate_mask_correlation(g, spec, 2000, 5);
  CHECK(m.mean_intensity == doctest::Approx(1.0).epsilon(0.03));
  CHECK(m.rms_omega < 0.03);
  CHECK(m.rms_two_omega < 0.05);
  REQUIRE(m.lag.size() == m.omega.size());
  CHECK(m.lag.front() == 0.0);
  CHECK(m.target.front() == 1.0);
  // Correlation length: exp(-1) at dr = 2 xi0.
  for (std::size_t i = 0; i < m.lag.size(); ++i) {
    if (std::abs(m.lag[i] - 2.0 * spec.xi0()) < 0.5 * g.dx()) {
      CHECK(m.omega[i] == doctest::Approx(std::exp(-1.0)).epsilon(0.1));
    }
  }
  CHECK(m.two_omega.front() == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(estimate_mask_correlation(g, spec, 0, 5), ConfigError);
}

TEST_CASE("2 omega mask and screen transmission") {
  const DiffuserSpec spec(0.5, 1.0);
  const TransverseGrid g(1, 256, spec.xi0() / 4, 1.0);
  const auto m = synthesize_diffuser(g, spec, 1);
  const auto v2 = mask_at_2omega(m);
  for (std::size_t i = 0; i < g.size(); i += 13) CHECK(std::abs(v2[i] - m.at_omega[i] * m.at_omega[i]) < 1e-15);
  const auto t = apply_mask(m.at_omega, m.at_omega);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(t[i] == v2[i]);
  const TransverseGrid other(1, 128, spec.xi0() / 4, 1.0);
  CHECK_THROWS_AS(apply_mask(ComplexField(other), m.at_omega), ConfigError);
}

TEST_CASE("sampling rule") {
  const DiffuserSpec spec(0.5, 1.0);
  CHECK_NOTHROW(check_sampling_rule(TransverseGrid(1, 64, spec.xi0() / 4, 1.0), spec));
  CHECK_THROWS_WITH_AS(check_sampling_rule(TransverseGrid(1, 64, spec.xi0() / 3, 1.0), spec),
                       doctest::Contains("xi0/4"), ConfigError);
  CHECK_THROWS_AS(DiffuserSynthesizer(TransverseGrid(1, 64, spec.xi0(), 1.0), spec), ConfigError);
}
