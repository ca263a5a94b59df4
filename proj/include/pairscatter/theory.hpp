#pragma once

#include <span>
#include <vector>

#include "pairscatter/specs.hpp"

namespace pairscatter::theory {

// Symbols of the closed-form correlation functions. z is signed: PLUS
// needs 0 <= z <= d/2, MINUS needs z <= 0.
struct TheoryParams {
  double k = 1.0;
  double d = 0.0;
  double z = 0.0;
  double theta0 = 0.0;
  int dim = 1;
  // Exponent p of the global weight (1 + z~^2)^p carried by the second
  // MINUS diagram pair. -1/2 in both 1D and 2D (1D checked against the
  // field simulation, see default_weight_exponent).
  double weight_exponent = -0.5;

  double xi0() const { return 1.0 / (k * theta0); }
  double z0() const { return 1.0 / (k * theta0 * theta0); }
  double z_tilde() const { return z / z0(); }
  double kd_theta0() const { return k * d * theta0; }

  double dtheta_plus() const;    // 1 / (k d theta0 (1 - z/d))
  double dtheta_minus1() const;  // 1 / (k d theta0 (1 + 2|z|/d))
  double dtheta_minus2() const;  // sqrt(1 + z~^2) / (k d theta0 sqrt(1 + 2|z|/d))
  double minus2_weight() const;  // (1 + z~^2)^p
  // Width s of the second MINUS envelope along theta_a = 0, in the form
  // exp(-theta^2 / 4 s^2): theta0 sqrt((1 + z~^2) / (1 + 3 z~^2)).
  double minus2_envelope_width() const;
};

double default_weight_exponent(int dim);

// Throws ConfigError when the parameters cannot describe `variant`.
void check(const TheoryParams& p, Variant variant);

TheoryParams make_params(double k, double d, double z, double theta0, int dim = 1);

struct Angle2 {
  double x = 0.0;
  double y = 0.0;
};

// Diffuser power spectrum at omega, exp(-q^2 xi0^2) (unity at q = 0).
double f_omega(double q, const TheoryParams& p);
// Spectrum of V(2 omega) = V^2: the normalized self-convolution of f_omega
// times two, 2^{1 - dim/2} exp(-q^2 xi0^2 / 2), consistent with <|V|^2> = 1.
double f_2omega(double q, const TheoryParams& p);

// Pieces of one correlation value: total = background + peak.
struct GammaTerms {
  double total = 0.0;
  double peak = 0.0;
  double background = 0.0;
  // MINUS only: the two diagram pairs.
  double minus1 = 0.0;
  double minus2 = 0.0;
};

GammaTerms gamma_plus_terms(double theta_a, double theta_b, const TheoryParams& p);
GammaTerms gamma_minus_terms(double theta_a, double theta_b, const TheoryParams& p);
GammaTerms gamma_plus_terms(Angle2 theta_a, Angle2 theta_b, const TheoryParams& p);
GammaTerms gamma_minus_terms(Angle2 theta_a, Angle2 theta_b, const TheoryParams& p);
GammaTerms gamma_terms(double theta_a, double theta_b, const TheoryParams& p, Variant v);

inline double gamma_plus(double ta, double tb, const TheoryParams& p) {
  return gamma_plus_terms(ta, tb, p).total;
}
inline double gamma_minus(double ta, double tb, const TheoryParams& p) {
  return gamma_minus_terms(ta, tb, p).total;
}

// FWHM of the enhancement term(s) along theta = theta_b - theta_a at
// theta_a = 0. PLUS is closed form, 2 sqrt(2 ln 2) dtheta_plus; MINUS is
// solved numerically from the two-Gaussian sum.
double theory_peak_width(const TheoryParams& p, Variant v);

// |z~| at which the MINUS peak FWHM is largest (k, d, theta0 fixed).
// Scans [0, zt_max] on a dense grid and refines by golden section.
double theory_width_max_location(const TheoryParams& p, double zt_max = 20.0);

// Curves along theta = theta_b - theta_a at fixed theta_a.
struct TheoryCurve {
  std::vector<double> theta;
  std::vector<double> total;
  std::vector<double> peak;
  std::vector<double> background;
  std::vector<double> minus1;
  std::vector<double> minus2;
};

TheoryCurve theory_curve(std::span<const double> theta_axis, const TheoryParams& p, Variant v,
                         double theta_a = 0.0);
std::vector<double> theory_background(std::span<const double> theta_axis, const TheoryParams& p,
                                      Variant v, double theta_a = 0.0);

}  // namespace pairscatter::theory
