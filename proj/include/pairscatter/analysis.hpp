#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairscatter/config.hpp"
#include "pairscatter/engine.hpp"
#include "pairscatter/theory.hpp"

namespace pairscatter::analysis {

// A value with its one-sigma uncertainty.
struct Measurement {
  double value = 0.0;
  double uncertainty = 0.0;
};

// Curve on a theta axis; errors may be empty (treated as zero).
struct Curve {
  std::vector<double> theta;
  std::vector<double> values;
  std::vector<double> errors;
};

Curve from_simulation(const CorrelationCurve& c);
Curve from_theory(std::span<const double> theta, std::span<const double> values);

// Both curves divided by their own trapezoidal area, then jointly by the
// maximum of the scaled theory curve. The scale factors are kept so raw
// amplitudes can be recovered.
struct NormalizedPair {
  Curve simulation;
  Curve theory;
  double simulation_scale = 1.0;  // normalized = raw * scale
  double theory_scale = 1.0;
};

NormalizedPair normalize_pair(const Curve& simulation, const Curve& theory);

double trapezoid_area(const Curve& c);

struct BackgroundSubtracted {
  Curve curve;
  bool significant_negative = false;  // some bin below zero by more than 3 sigma
  double most_negative_sigma = 0.0;   // min over bins of value/error (<= 0 when negative)
};

BackgroundSubtracted subtract_background(const Curve& curve, std::span<const double> background);

// Full width at half maximum of the dominant peak by linear interpolation
// of the half-maximum crossings. The uncertainty is half the spread between
// the widths of values +/- errors.
Measurement fwhm(const Curve& c);

// Peak value divided by the background extrapolated to the peak position.
// The background is fitted as log g = c0 + c1 u + c2 u^2 with u = theta^2
// over peak_width*4 <= |theta - theta_peak| <= theta_max.
Measurement enhancement_ratio(const Curve& c, double peak_width, double theta_max);

// Points with |theta| <= half_width.
Curve window(const Curve& c, double half_width);

// Width of the enhancement peak of a simulated cut at theta_a = 0: the cut
// and the closed form are normalized together, the scaled closed-form
// background is subtracted and the FWHM of the remainder measured.
// half_window > 0 restricts the analysis to |theta| <= half_window first.
struct PeakWidth {
  Measurement fwhm;
  bool significant_negative = false;
  Curve subtracted;
};
PeakWidth enhancement_fwhm(const Curve& simulation, const theory::TheoryParams& p, Variant v,
                           double half_window);

struct SweepPoint {
  double z_over_z0 = 0.0;
  double z_over_d = 0.0;
  Measurement fwhm_over_theta0;
  Measurement amp_norm;  // raw peak value relative to the z = 0 run
  double theory_fwhm_over_theta0 = 0.0;
  double theory_amp_norm = 0.0;
  bool significant_negative = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

struct SweepOptions {
  int threads = 1;
  // Angular half-window over which curves are analysed, in theory FWHM at
  // the same z. Zero uses the whole axis.
  double window_in_widths = 40.0;
};

// Runs the engine at every |z~| (MINUS uses z = -|z~| z0, PLUS z = +|z~| z0)
// and measures the background-subtracted peak width and amplitude.
SweepResult sweep_z(const DimensionlessSetup& base, std::span<const double> z_over_z0_list,
                    const SweepOptions& options = {});

// Separable two-envelope fit along theta_a = 0,
//   g(theta) = a exp(-theta^2 / 4 theta0^2) + b exp(-theta^2 / 4 s^2),
// returning s with a, b solved linearly for each trial s.
struct BackgroundFit {
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
  double residual = 0.0;
};
BackgroundFit fit_two_envelopes(const Curve& c, double theta0, double s_lo, double s_hi);

// Single-envelope width s of g = A exp(-theta^2 / 4 s^2), fitted in log
// space on |theta| >= exclude (keeps the peak out of the fit).
Measurement effective_envelope_width(const Curve& c, double exclude);

// Copy of `c` without the points with |theta| < exclude.
Curve without_centre(const Curve& c, double exclude);

theory::TheoryParams theory_params(const ScatterConfig& config);

}  // namespace pairscatter::analysis
