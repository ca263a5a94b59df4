#include <cmath>
#include <random>

#include "doctest.h"
#include "pairscatter/analysis.hpp"
#include "pairscatter/error.hpp"
#include "pairscatter/theory.hpp"

using namespace pairscatter;
using namespace pairscatter::analysis;

namespace {

Curve sampled(double lo, double hi, std::size_t n, auto f) {
  Curve c;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    c.theta.push_back(t);
    c.values.push_back(f(t));
  }
  return c;
}

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::log(2.0));

}  // namespace

TEST_CASE("normalization: theory peak 1, equal areas, scale free") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng), w = u(rng) * 0.1;
    const Curve th = sampled(-1, 1, 101, [&](double t) { return a * std::exp(-t * t / (w + 0.1)); });
    Curve sim = sampled(-1, 1, 101, [&](double t) { return b * (1.0 + 0.1 * t) * std::exp(-t * t / 0.3); });
    sim.errors.assign(sim.values.size(), 0.01 * b);
    const auto n = normalize_pair(sim, th);
    CHECK(*std::max_element(n.theory.values.begin(), n.theory.values.end()) == doctest::Approx(1.0));
    CHECK(trapezoid_area(n.simulation) == doctest::Approx(trapezoid_area(n.theory)).epsilon(1e-12));
    CHECK(n.simulation.errors[0] == doctest::Approx(0.01 * b * n.simulation_scale));
    // Rescaling either input leaves the normalized curves unchanged.
    Curve sim2 = sim;
    for (double& v : sim2.values) v *= 7.5;
    for (double& e : sim2.errors) e *= 7.5;
    const auto n2 = normalize_pair(sim2, th);
    for (std::size_t i = 0; i < sim.values.size(); i += 10)
      CHECK(n2.simulation.values[i] == doctest::Approx(n.simulation.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("normalization errors") {
  const Curve a = sampled(-1, 1, 11, [](double) { return 1.0; });
  const Curve b = sampled(-1, 2, 11, [](double) { return 1.0; });
  const Curve zero = sampled(-1, 1, 11, [](double) { return 0.0; });
  CHECK_THROWS_AS(normalize_pair(a, b), ConfigError);
  CHECK_THROWS_AS(normalize_pair(zero, a), NumericalError);
  CHECK_THROWS_AS(from_theory(std::vector<double>{1, 2}, std::vector<double>{1}), ConfigError);
}

TEST_CASE("background subtraction flags significant negatives only") {
  Curve c = sampled(-1, 1, 5, [](double) { return 1.0; });
  c.errors.assign(5, 0.1);
  const std::vector<double> bg1{1.0, 1.0, 1.2, 1.0, 1.0};
  const auto mild = subtract_background(c, bg1);
  CHECK_FALSE(mild.significant_negative);
  CHECK(mild.most_negative_sigma == doctest::Approx(-2.0));
  CHECK(mild.curve.values[2] == doctest::Approx(-0.2));
  const std::vector<double> bg2{1.0, 1.5, 1.0, 1.0, 1.0};
  CHECK(subtract_background(c, bg2).significant_negative);
  CHECK_THROWS_AS(subtract_background(c, std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("FWHM of a Gaussian converges with sampling") {
  const double sigma = 0.013;
  double last_err = 1.0;
  for (std::size_t n : {41u, 161u, 641u, 2561u}) {
    const Curve c = sampled(-0.1, 0.1, n, [&](double t) { return std::exp(-t * t / (2 * sigma * sigma)); });
    const double err = std::abs(fwhm(c).value / (kFwhmPerSigma * sigma) - 1.0);
    CHECK(err <= last_err);
    last_err = err;
  }
  CHECK(last_err < 1e-5);
}

TEST_CASE("FWHM is shift invariant and reports an uncertainty") {
  const double sigma = 0.02;
  Curve c = sampled(-0.2, 0.3, 1001, [&](double t) { return 3 * std::exp(-(t - 0.05) * (t - 0.05) / (2 * sigma * sigma)); });
  CHECK(fwhm(c).value == doctest::Approx(kFwhmPerSigma * sigma).epsilon(1e-4));
  c.errors.assign(c.values.size(), 0.03);
  const auto m = fwhm(c);
  CHECK(m.uncertainty > 0.0);
  CHECK(m.uncertainty < 0.05 * m.value);
}

TEST_CASE("FWHM errors") {
  const Curve edge = sampled(0, 1, 20, [](double t) { return 1.0 - t; });
  CHECK_THROWS_AS(fwhm(edge), NumericalError);
  const Curve wide = sampled(-1, 1, 21, [](double t) { return 2.0 - 0.1 * t * t; });
  CHECK_THROWS_AS(fwhm(wide), NumericalError);
  const Curve tiny = sampled(-1, 1, 2, [](double) { return 1.0; });
  CHECK_THROWS_AS(fwhm(tiny), ConfigError);
}

TEST_CASE("enhancement ratio of doubled, flat and theory curves") {
  const double t0 = 0.56, w = 0.004;
  const Curve doubled = sampled(-0.6, 0.6, 4001, [&](double t) {
    return std::exp(-t * t / (4 * t0 * t0)) * (1 + std::exp(-t * t / (2 * w * w)));
  });
  CHECK(enhancement_ratio(doubled, kFwhmPerSigma * w, 0.6).value == doctest::Approx(2.0).epsilon(1e-4));
  const Curve flat = sampled(-0.6, 0.6, 401, [](double) { return 3.0; });
  CHECK(enhancement_ratio(flat, 0.01, 0.6).value == doctest::Approx(1.0).epsilon(1e-12));

  // Far from the diffuser (MINUS, z~ = 30) the enhancement is still two; the
  // faint second envelope is not log-quadratic, which costs a few 1e-3.
  auto p = theory::make_params(1.0, 5697, 0.0, t0);
  p.z = -30.0 * p.z0();
  std::vector<double> axis;
  for (int i = -4000; i <= 4000; ++i) axis.push_back(i * 1.5e-4);
  const auto th = theory::theory_curve(axis, p, Variant::kMinus);
  const double width = theory::theory_peak_width(p, Variant::kMinus);
  CHECK(enhancement_ratio(from_theory(th.theta, th.total), width, 0.6).value ==
        doctest::Approx(2.0).epsilon(5e-3));
  CHECK_THROWS_AS(enhancement_ratio(flat, 0.2, 0.6), ConfigError);
}

TEST_CASE("two-envelope fit recovers the second width") {
  const double t0 = 0.56;
  for (double s : {0.25, 0.4, 0.7}) {
    const Curve c = sampled(-1.5, 1.5, 601, [&](double t) {
      return 1.3 * std::exp(-t * t / (4 * t0 * t0)) + 0.6 * std::exp(-t * t / (4 * s * s));
    });
    const auto fit = fit_two_envelopes(c, t0, 0.1, 2.0);
    CHECK(fit.s == doctest::Approx(s).epsilon(1e-6));
    CHECK(fit.a == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(fit.b == doctest::Approx(0.6).epsilon(1e-6));
  }
  CHECK_THROWS_AS(fit_two_envelopes(sampled(-1, 1, 11, [](double) { return 1.0; }), t0, 0.5, 0.1),
                  ConfigError);
}

TEST_CASE("effective envelope width ignores the centre") {
  const double s = 0.45;
  const Curve c = sampled(-1.2, 1.2, 481, [&](double t) {
    return std::exp(-t * t / (4 * s * s)) * (1 + (std::abs(t) < 0.01 ? 5.0 : 0.0));
  });
  CHECK(effective_envelope_width(c, 0.02).value == doctest::Approx(s).epsilon(1e-9));
  CHECK(without_centre(c, 0.02).theta.size() < c.theta.size());
  CHECK_THROWS_AS(effective_envelope_width(c, 10.0), NumericalError);
}

TEST_CASE("sweep reports z = 0 amplitude one and finite widths") {
  DimensionlessSetup s;
  s.n = 4096;
  s.kd = 400;
  s.variant = Variant::kMinus;
  s.realizations = 64;
  s.seed = 2;
  const std::vector<double> zl{0.0, 1.0};
  const auto r = sweep_z(s, zl);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].amp_norm.value == 1.0);
  CHECK(r.points[0].theory_amp_norm == 1.0);
  CHECK(r.points[1].theory_amp_norm < 1.0);
  CHECK(r.points[1].z_over_d < 0.0);
  for (const auto& p : r.points) {
    CHECK(p.fwhm_over_theta0.value > 0.0);
    CHECK(p.fwhm_over_theta0.value == doctest::Approx(p.theory_fwhm_over_theta0).epsilon(0.5));
  }
  CHECK_THROWS_AS(sweep_z(s, std::vector<double>{}), ConfigError);
}
