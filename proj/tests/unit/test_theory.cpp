#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pairscatter/error.hpp"
#include "pairscatter/theory.hpp"

using namespace pairscatter;
using namespace pairscatter::theory;

namespace {

// Test-side transcription of the closed forms, written directly from the
// published expressions (1D angles, weight 1/sqrt(1 + z~^2)).
double oracle_plus(double ta, double tb, double kd, double z_over_d, double t0) {
  const double dt = 1.0 / (kd * t0 * (1.0 - z_over_d));
  return 2.0 * std::exp(-(ta + tb) * (ta + tb) / (4 * t0 * t0)) *
         (1.0 + std::exp(-(ta - tb) * (ta - tb) / (2 * dt * dt)));
}

double oracle_minus(double ta, double tb, double kd, double zt, double t0) {
  const double z0 = 1.0 / (t0 * t0);  // k = 1
  const double z_over_d = std::abs(zt) * z0 / kd;
  const double d1 = 1.0 / (kd * t0 * (1.0 + 2.0 * z_over_d));
  const double d2 = std::sqrt(1.0 + zt * zt) / (kd * t0 * std::sqrt(1.0 + 2.0 * z_over_d));
  const double g1 = std::exp(-(ta + tb) * (ta + tb) / (4 * t0 * t0)) *
                    (1.0 + std::exp(-(ta - tb) * (ta - tb) / (2 * d1 * d1)));
  const double num = (ta + tb) * (ta + tb) + zt * zt * (3 * ta * ta + 3 * tb * tb - 2 * ta * tb);
  const double g2 = std::exp(-num / (4 * (1 + zt * zt) * t0 * t0)) / std::sqrt(1 + zt * zt) *
                    (1.0 + std::exp(-(ta - tb) * (ta - tb) / (2 * d2 * d2)));
  return g1 + g2;
}

TheoryParams minus_params(double kd, double zt, double t0, int dim = 1) {
  TheoryParams p = make_params(1.0, kd, 0.0, t0, dim);
  p.z = -std::abs(zt) * p.z0();
  return p;
}

}  // namespace

TEST_CASE("closed forms agree with the transcribed oracle") {
  const double t0 = 0.56, kd = 5697;
  for (double zd : {0.0, 0.1, 0.25, 0.5}) {
    const auto p = make_params(1.0, kd, zd * kd, t0);
    for (double ta : {0.0, 0.05, -0.3}) {
      for (double tb : {0.0, 1e-4, 3e-4, -0.2, 0.9}) {
        CHECK(gamma_plus(ta, tb, p) == doctest::Approx(oracle_plus(ta, tb, kd, zd, t0)).epsilon(1e-13));
      }
    }
  }
  for (double zt : {0.0, 0.5, 1.0, 2.1, 10.0}) {
    const auto p = minus_params(kd, zt, t0);
    for (double ta : {0.0, 0.05, -0.3}) {
      for (double tb : {0.0, 1e-4, 3e-4, -0.2, 0.9}) {
        CHECK(gamma_minus(ta, tb, p) == doctest::Approx(oracle_minus(ta, tb, kd, zt, t0)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("terms decompose the total") {
  const auto p = minus_params(800, 1.3, 0.56);
  for (double tb : {0.0, 1e-3, 0.4}) {
    const auto g = gamma_minus_terms(0.1, tb, p);
    CHECK(g.total == doctest::Approx(g.background + g.peak).epsilon(1e-15));
    CHECK(g.total == doctest::Approx(g.minus1 + g.minus2).epsilon(1e-15));
  }
  const auto q = make_params(1.0, 800, 100, 0.56);
  const auto g = gamma_plus_terms(0.0, 0.0, q);
  CHECK(g.peak == doctest::Approx(g.background));
}

TEST_CASE("enhancement of two at theta_a = theta_b and symmetry properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double ta = u(rng), tb = u(rng);
    const double zt = 5.0 * std::abs(u(rng));
    const auto pm = minus_params(2000, zt, 0.56);
    const auto pp = make_params(1.0, 2000, 1000 * std::abs(u(rng)), 0.56);
    // Reciprocity: swapping detectors leaves the rate unchanged.
    CHECK(gamma_minus(ta, tb, pm) == doctest::Approx(gamma_minus(tb, ta, pm)).epsilon(1e-14));
    CHECK(gamma_plus(ta, tb, pp) == doctest::Approx(gamma_plus(tb, ta, pp)).epsilon(1e-14));
    // Parity.
    CHECK(gamma_minus(-ta, -tb, pm) == doctest::Approx(gamma_minus(ta, tb, pm)).epsilon(1e-14));
    // Exactly doubled on the diagonal.
    const auto gd = gamma_minus_terms(ta, ta, pm);
    CHECK(gd.total == doctest::Approx(2.0 * gd.background).epsilon(1e-14));
    // Positive, and never above the doubled background.
    const auto g = gamma_minus_terms(ta, tb, pm);
    CHECK(g.total > 0.0);
    CHECK(g.total <= 2.0 * g.background * (1 + 1e-14));
  }
}

TEST_CASE("2D evaluation reduces to 1D along the x axis and is rotation invariant") {
  const auto p1 = minus_params(1000, 1.7, 0.5, 1);
  auto p2 = p1;
  p2.dim = 2;
  for (double ta : {0.0, 0.2}) {
    for (double tb : {0.0, 0.001, -0.3}) {
      CHECK(gamma_minus_terms(Angle2{ta, 0}, Angle2{tb, 0}, p2).total ==
            doctest::Approx(gamma_minus(ta, tb, p1)).epsilon(1e-15));
      const double c = std::cos(0.7), s = std::sin(0.7);
      CHECK(gamma_minus_terms(Angle2{ta * c, ta * s}, Angle2{tb * c, tb * s}, p2).total ==
            doctest::Approx(gamma_minus(ta, tb, p1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("f_2omega is the self-convolution of f_omega with twice its area") {
  for (int dim : {1, 2}) {
    const auto p = make_params(1.0, 100, 0, 0.4, dim);
    const double xi = p.xi0();
    const double h = 0.01 / xi, lim = 12.0 / xi;
    // Shape: 1D quadrature (the 2D Gaussian factorizes).
    auto conv = [&](double q) {
      double s = 0.0;
      for (double t = -lim; t <= lim; t += h) s += f_omega(t, p) * f_omega(q - t, p);
      return s * h;
    };
    for (double q : {0.5 / xi, 1.5 / xi, 3.0 / xi}) {
      CHECK(f_2omega(q, p) / f_2omega(0.0, p) == doctest::Approx(conv(q) / conv(0.0)).epsilon(1e-9));
    }
    // Area: zero-lag correlation <|V^2|^2> = <|V|^4> = 2 <|V|^2>^2 for a
    // circular Gaussian mask, and a Gaussian sqrt(2) wider has sqrt(2)^dim
    // times the area.
    auto area = [&](auto f) {
      double s = 0.0;
      for (double t = -lim; t <= lim; t += h) s += f(t);
      return std::pow(s * h, dim) / std::pow(f(0.0), dim - 1);
    };
    const double a1 = area([&](double q) { return f_omega(q, p); });
    const double a2 = area([&](double q) { return f_2omega(q, p); });
    CHECK(a2 / a1 == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("peak widths") {
  const auto p = make_params(1.0, 5697, 0, 0.56);
  const double fwhm_per_sigma = 2.0 * std::sqrt(2.0 * std::log(2.0));
  CHECK(theory_peak_width(p, Variant::kPlus) == doctest::Approx(fwhm_per_sigma / (5697 * 0.56)));
  // At z = 0 both MINUS pairs share one width, so it equals PLUS.
  CHECK(theory_peak_width(p, Variant::kMinus) ==
        doctest::Approx(theory_peak_width(p, Variant::kPlus)).epsilon(1e-9));
  // PLUS broadens monotonically up to z = d/2, where it doubles.
  double last = 0.0;
  for (double zd = 0.0; zd <= 0.5; zd += 0.05) {
    const double w = theory_peak_width(make_params(1.0, 5697, zd * 5697, 0.56), Variant::kPlus);
    CHECK(w > last);
    last = w;
  }
  CHECK(last == doctest::Approx(2.0 * theory_peak_width(p, Variant::kPlus)));
  // MINUS half-maximum crossing really is one.
  const auto m = minus_params(5697, 2.0, 0.56);
  const double w = theory_peak_width(m, Variant::kMinus);
  CHECK(gamma_minus_terms(0.0, 0.5 * w, m).peak ==
        doctest::Approx(0.5 * gamma_minus_terms(0.0, 0.0, m).peak).epsilon(1e-9));
}

TEST_CASE("MINUS width is non-monotonic with its maximum near z~ = 2") {
  const auto p = make_params(1.0, 5697, 0, 0.56);
  const double at = theory_width_max_location(p);
  CHECK(at == doctest::Approx(2.1).epsilon(0.1 / 2.1));
  auto width = [&](double zt) { return theory_peak_width(minus_params(5697, zt, 0.56), Variant::kMinus); };
  CHECK(width(at) > width(0.0));
  CHECK(width(at) > width(10.0));
  CHECK(width(at) >= width(at - 0.05));
  CHECK(width(at) >= width(at + 0.05));
}

TEST_CASE("MINUS amplitude relative to z = 0 tends to one half") {
  const double kd = 5697, t0 = 0.56;
  const double base = gamma_minus(0, 0, minus_params(kd, 0, t0));
  CHECK(gamma_minus(0, 0, minus_params(kd, 100, t0)) / base == doctest::Approx(0.5).epsilon(0.02));
  // Enhancement ratio stays two at any depth.
  const auto g = gamma_minus_terms(0, 0, minus_params(kd, 50, t0));
  CHECK(g.total / g.background == doctest::Approx(2.0));
}

TEST_CASE("theory curves") {
  const auto p = minus_params(800, 1.0, 0.56);
  std::vector<double> axis{-0.1, 0.0, 0.1};
  const auto c = theory_curve(axis, p, Variant::kMinus, 0.05);
  REQUIRE(c.total.size() == 3);
  CHECK(c.total[1] == doctest::Approx(gamma_minus(0.05, 0.05, p)));
  CHECK(c.total[2] == doctest::Approx(gamma_minus(0.05, 0.15, p)));
  const auto bg = theory_background(axis, p, Variant::kMinus, 0.05);
  CHECK(bg[0] == doctest::Approx(c.background[0]));
  CHECK(p.minus2_envelope_width() == doctest::Approx(0.56 * std::sqrt(2.0 / 4.0)));
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(check(make_params(1.0, 100, 0, 0.0), Variant::kPlus), ConfigError);
  CHECK_THROWS_WITH_AS(check(make_params(1.0, 100, 60, 0.5), Variant::kPlus),
                       doctest::Contains("z <= d/2"), ConfigError);
  CHECK_THROWS_AS(check(make_params(1.0, 100, -1, 0.5), Variant::kPlus), ConfigError);
  CHECK_THROWS_AS(check(make_params(1.0, 100, 1, 0.5), Variant::kMinus), ConfigError);
  CHECK_THROWS_AS(gamma_plus(0, 0, make_params(1.0, 100, 60, 0.5)), ConfigError);
  CHECK_THROWS_AS(theory_width_max_location(make_params(1.0, 1.0, 0, 0.5)), ConfigError);
}
