#include "pairscatter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairscatter/error.hpp"

namespace pairscatter::analysis {

Curve from_simulation(const CorrelationCurve& c) {
  return Curve{c.theta_axis, c.values, c.std_errors};
}

Curve from_theory(std::span<const double> theta, std::span<const double> values) {
  if (theta.size() != values.size()) throw ConfigError("theory curve: axis/value size mismatch");
  return Curve{{theta.begin(), theta.end()}, {values.begin(), values.end()}, {}};
}

namespace {

double error_at(const Curve& c, std::size_t i) { return c.errors.empty() ? 0.0 : c.errors[i]; }

void check_curve(const Curve& c, const char* what) {
  if (c.theta.size() != c.values.size() || (!c.errors.empty() && c.errors.size() != c.values.size())) {
    throw ConfigError(std::string(what) + ": inconsistent curve sizes");
  }
  if (c.theta.size() < 3) throw ConfigError(std::string(what) + ": curve needs at least 3 points");
}

void check_same_axis(const Curve& a, const Curve& b) {
  if (a.theta.size() != b.theta.size()) throw ConfigError("curves are on different axes");
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::abs(a.theta[i]));
    if (std::abs(a.theta[i] - b.theta[i]) > tol) throw ConfigError("curves are on different axes");
  }
}

Curve scaled(const Curve& c, double s) {
  Curve out = c;
  for (double& v : out.values) v *= s;
  for (double& e : out.errors) e *= s;
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double trapezoid_area(const Curve& c) {
  double area = 0.0;
  for (std::size_t i = 1; i < c.theta.size(); ++i) {
    area += 0.5 * (c.values[i] + c.values[i - 1]) * (c.theta[i] - c.theta[i - 1]);
  }
  return area;
}

NormalizedPair normalize_pair(const Curve& simulation, const Curve& theory) {
  check_curve(simulation, "normalize_pair");
  check_curve(theory, "normalize_pair");
  check_same_axis(simulation, theory);
  const double as = trapezoid_area(simulation);
  const double at = trapezoid_area(theory);
  if (!(as > 0.0) || !(at > 0.0)) throw NumericalError("normalize_pair: curve has zero area");
  const double peak = *std::max_element(theory.values.begin(), theory.values.end()) / at;
  NormalizedPair out;
  out.simulation_scale = 1.0 / (as * peak);
  out.theory_scale = 1.0 / (at * peak);
  out.simulation = scaled(simulation, out.simulation_scale);
  out.theory = scaled(theory, out.theory_scale);
  return out;
}

BackgroundSubtracted subtract_background(const Curve& curve, std::span<const double> background) {
  if (background.size() != curve.values.size()) {
    throw ConfigError("subtract_background: background is on a different axis");
  }
  BackgroundSubtracted out;
  out.curve = curve;
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    const double v = curve.values[i] - background[i];
    out.curve.values[i] = v;
    const double e = error_at(curve, i);
    if (v < 0.0 && e > 0.0) {
      out.most_negative_sigma = std::min(out.most_negative_sigma, v / e);
      if (v < -3.0 * e) out.significant_negative = true;
    }
  }
  return out;
}

namespace {

double crossing(const std::vector<double>& t, const std::vector<double>& v, std::size_t inside,
                std::size_t outside, double level) {
  const double f = (v[inside] - level) / (v[inside] - v[outside]);
  return t[inside] + f * (t[outside] - t[inside]);
}

double fwhm_of(const std::vector<double>& t, const std::vector<double>& v) {
  const std::size_t peak = argmax(v);
  if (peak == 0 || peak + 1 == v.size()) throw NumericalError("fwhm: peak at the edge of the window");
  const double half = 0.5 * v[peak];
  if (!(half > 0.0)) throw NumericalError("fwhm: non-positive peak");
  std::size_t l = peak;
  while (l > 0 && v[l - 1] > half) --l;
  if (l == 0) throw NumericalError("fwhm: no half-maximum crossing on the left");
  std::size_t r = peak;
  while (r + 1 < v.size() && v[r + 1] > half) ++r;
  if (r + 1 == v.size()) throw NumericalError("fwhm: no half-maximum crossing on the right");
  return crossing(t, v, r, r + 1, half) - crossing(t, v, l, l - 1, half);
}

}  // namespace

Measurement fwhm(const Curve& c) {
  check_curve(c, "fwhm");
  Measurement m;
  m.value = fwhm_of(c.theta, c.values);
  if (!c.errors.empty()) {
    std::vector<double> up = c.values, down = c.values;
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] += c.errors[i];
      down[i] -= c.errors[i];
    }
    m.uncertainty = 0.5 * std::abs(fwhm_of(c.theta, up) - fwhm_of(c.theta, down));
  }
  return m;
}

namespace {

// Weighted least squares for y = c0 + c1 u + c2 u^2; returns c0.
double log_fit_intercept(const std::vector<double>& u, const std::vector<double>& y,
                         const std::vector<double>& w) {
  double s[5] = {0, 0, 0, 0, 0};
  double r[3] = {0, 0, 0};
  // Scale u to O(1) to keep the normal equations well conditioned.
  const double umax = *std::max_element(u.begin(), u.end());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i] / umax;
    double p = w[i];
    for (int k = 0; k < 5; ++k) {
      s[k] += p;
      if (k < 3) r[k] += p * y[i];
      p *= x;
    }
  }
  // 3x3 Gaussian elimination.
  double a[3][4] = {{s[0], s[1], s[2], r[0]}, {s[1], s[2], s[3], 0.0}, {s[2], s[3], s[4], 0.0}};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i] / umax;
    a[1][3] += w[i] * x * y[i];
    a[2][3] += w[i] * x * x * y[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) throw NumericalError("enhancement_ratio: singular background fit");
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
    }
  }
  return a[0][3] / a[0][0];
}

double background_at_peak(const Curve& c, double peak_theta, double lo, double hi,
                          const std::vector<double>& values) {
  std::vector<double> u, y, w;
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    const double dt = std::abs(c.theta[i] - peak_theta);
    if (dt < lo || dt > hi || !(values[i] > 0.0)) continue;
    u.push_back(dt * dt);
    y.push_back(std::log(values[i]));
    const double e = error_at(c, i);
    // log-space weight; uniform when no errors are known
    w.push_back(e > 0.0 ? (values[i] / e) * (values[i] / e) : 1.0);
  }
  if (u.size() < 8) throw NumericalError("enhancement_ratio: too few background points in window");
  return std::exp(log_fit_intercept(u, y, w));
}

}  // namespace

Measurement enhancement_ratio(const Curve& c, double peak_width, double theta_max) {
  check_curve(c, "enhancement_ratio");
  if (!(peak_width > 0.0) || !(theta_max > 4.0 * peak_width)) {
    throw ConfigError("enhancement_ratio: need 0 < 4 * peak_width < theta_max");
  }
  const std::size_t peak = argmax(c.values);
  const double t_peak = c.theta[peak];
  const double lo = 4.0 * peak_width;
  Measurement m;
  const double bg = background_at_peak(c, t_peak, lo, theta_max, c.values);
  m.value = c.values[peak] / bg;
  if (!c.errors.empty()) {
    // Peak-bin error plus the spread of the background under +/- sigma.
    std::vector<double> up = c.values, down = c.values;
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] += c.errors[i];
      down[i] -= c.errors[i];
    }
    const double bg_up = background_at_peak(c, t_peak, lo, theta_max, up);
    const double bg_down = background_at_peak(c, t_peak, lo, theta_max, down);
    const double rel_bg = 0.5 * std::abs(bg_up - bg_down) / bg;
    const double rel_peak = c.errors[peak] / c.values[peak];
    m.uncertainty = m.value * std::hypot(rel_bg, rel_peak);
  }
  return m;
}

Curve without_centre(const Curve& c, double exclude) {
  Curve out;
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    if (std::abs(c.theta[i]) < exclude) continue;
    out.theta.push_back(c.theta[i]);
    out.values.push_back(c.values[i]);
    if (!c.errors.empty()) out.errors.push_back(c.errors[i]);
  }
  return out;
}

namespace {

double log_width(const Curve& c, const std::vector<double>& values) {
  double sw = 0, su = 0, suu = 0, sy = 0, suy = 0;
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    const double e = error_at(c, i);
    const double w = e > 0.0 ? (values[i] / e) * (values[i] / e) : 1.0;
    const double u = c.theta[i] * c.theta[i];
    const double y = std::log(values[i]);
    sw += w;
    su += w * u;
    suu += w * u * u;
    sy += w * y;
    suy += w * u * y;
  }
  const double det = sw * suu - su * su;
  if (!(det > 0.0)) throw NumericalError("envelope width: degenerate fit");
  const double slope = (sw * suy - su * sy) / det;
  if (!(slope < 0.0)) throw NumericalError("envelope width: envelope does not decay");
  return std::sqrt(-1.0 / (4.0 * slope));
}

}  // namespace

Measurement effective_envelope_width(const Curve& c, double exclude) {
  const Curve bg = without_centre(c, exclude);
  if (bg.theta.size() < 8) throw NumericalError("envelope width: too few points outside the peak");
  Measurement m;
  m.value = log_width(bg, bg.values);
  if (!bg.errors.empty()) {
    std::vector<double> up = bg.values, down = bg.values;
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] += bg.errors[i];
      down[i] -= bg.errors[i];
    }
    m.uncertainty = 0.5 * std::abs(log_width(bg, up) - log_width(bg, down));
  }
  return m;
}

theory::TheoryParams theory_params(const ScatterConfig& config) {
  return theory::make_params(config.grid.k(), config.geometry.d(), config.geometry.z(),
                             config.diffuser.theta0(), config.grid.dim());
}

Curve window(const Curve& c, double half_width) {
  Curve out;
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    if (std::abs(c.theta[i]) > half_width * (1.0 + 1e-12)) continue;
    out.theta.push_back(c.theta[i]);
    out.values.push_back(c.values[i]);
    if (!c.errors.empty()) out.errors.push_back(c.errors[i]);
  }
  return out;
}

PeakWidth enhancement_fwhm(const Curve& simulation, const theory::TheoryParams& p, Variant v,
                           double half_window) {
  const Curve sim = half_window > 0.0 ? window(simulation, half_window) : simulation;
  const auto th = theory::theory_curve(sim.theta, p, v);
  const NormalizedPair pair = normalize_pair(sim, from_theory(th.theta, th.total));
  std::vector<double> bg = th.background;
  for (double& x : bg) x *= pair.theory_scale;
  const BackgroundSubtracted sub = subtract_background(pair.simulation, bg);
  PeakWidth out;
  out.fwhm = fwhm(sub.curve);
  out.significant_negative = sub.significant_negative;
  out.subtracted = sub.curve;
  return out;
}

namespace {

struct PeakRun {
  double raw_peak = 0.0;
  double raw_peak_err = 0.0;
  double theory_peak = 0.0;
  Measurement width;
  bool negative = false;
  double z_over_d = 0.0;
  double theory_width = 0.0;
};

PeakRun run_one(const DimensionlessSetup& setup, const SweepOptions& options) {
  DimensionlessSetup s = setup;
  ScatterConfig probe = make_config(s);
  const auto tp = theory_params(probe);
  const double width = theory::theory_peak_width(tp, s.variant);
  if (options.window_in_widths > 0.0) s.theta_span = options.window_in_widths * width;
  const ScatterConfig config = make_config(s);
  const CorrelationCurve sim = ensemble_average_cut(config, 0.0, options.threads);
  const PeakWidth pw = enhancement_fwhm(from_simulation(sim), tp, s.variant, 0.0);

  PeakRun r;
  r.width = pw.fwhm;
  r.negative = pw.significant_negative;
  const std::size_t centre = static_cast<std::size_t>(
      std::min_element(sim.theta_axis.begin(), sim.theta_axis.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      sim.theta_axis.begin());
  r.raw_peak = sim.values[centre];
  r.raw_peak_err = sim.std_errors[centre];
  r.theory_peak = theory::gamma_terms(0.0, sim.theta_axis[centre], tp, s.variant).total;
  r.z_over_d = config.geometry.z_over_d();
  r.theory_width = width;
  return r;
}

}  // namespace

SweepResult sweep_z(const DimensionlessSetup& base, std::span<const double> z_over_z0_list,
                    const SweepOptions& options) {
  if (z_over_z0_list.empty()) throw ConfigError("sweep_z: empty z list");
  const double sign = base.variant == Variant::kMinus ? -1.0 : 1.0;
  auto setup_at = [&](double zt) {
    DimensionlessSetup s = base;
    s.z_given_over_z0 = true;
    s.z_over_z0 = sign * std::abs(zt);
    return s;
  };
  // Amplitudes are reported relative to z = 0 in the same ensemble.
  std::vector<PeakRun> runs;
  std::size_t ref = z_over_z0_list.size();
  for (std::size_t i = 0; i < z_over_z0_list.size(); ++i) {
    runs.push_back(run_one(setup_at(z_over_z0_list[i]), options));
    if (z_over_z0_list[i] == 0.0 && ref == z_over_z0_list.size()) ref = i;
  }
  const PeakRun zero = ref < runs.size() ? runs[ref] : run_one(setup_at(0.0), options);

  const double theta0 = base.theta0;
  SweepResult out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const PeakRun& r = runs[i];
    SweepPoint p;
    p.z_over_z0 = std::abs(z_over_z0_list[i]);
    p.z_over_d = r.z_over_d;
    p.fwhm_over_theta0 = {r.width.value / theta0, r.width.uncertainty / theta0};
    const double ratio = r.raw_peak / zero.raw_peak;
    const double rel = i == ref ? 0.0 : std::hypot(r.raw_peak_err / r.raw_peak,
                                                   zero.raw_peak_err / zero.raw_peak);
    p.amp_norm = {ratio, ratio * rel};
    p.theory_fwhm_over_theta0 = r.theory_width / theta0;
    p.theory_amp_norm = r.theory_peak / zero.theory_peak;
    p.significant_negative = r.negative;
    out.points.push_back(p);
  }
  return out;
}

BackgroundFit fit_two_envelopes(const Curve& c, double theta0, double s_lo, double s_hi) {
  check_curve(c, "fit_two_envelopes");
  if (!(0.0 < s_lo && s_lo < s_hi)) throw ConfigError("fit_two_envelopes: need 0 < s_lo < s_hi");
  // For fixed s the model is linear in (a, b).
  auto solve = [&](double s) {
    double g11 = 0, g12 = 0, g22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
      const double t2 = c.theta[i] * c.theta[i];
      const double e = error_at(c, i);
      const double w = e > 0.0 ? 1.0 / (e * e) : 1.0;
      const double f1 = std::exp(-t2 / (4.0 * theta0 * theta0));
      const double f2 = std::exp(-t2 / (4.0 * s * s));
      g11 += w * f1 * f1;
      g12 += w * f1 * f2;
      g22 += w * f2 * f2;
      r1 += w * f1 * c.values[i];
      r2 += w * f2 * c.values[i];
    }
    BackgroundFit f;
    f.s = s;
    const double det = g11 * g22 - g12 * g12;
    if (std::abs(det) <= 1e-14 * g11 * g22) {
      f.residual = std::numeric_limits<double>::infinity();
      return f;
    }
    f.a = (r1 * g22 - r2 * g12) / det;
    f.b = (r2 * g11 - r1 * g12) / det;
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
      const double t2 = c.theta[i] * c.theta[i];
      const double e = error_at(c, i);
      const double w = e > 0.0 ? 1.0 / (e * e) : 1.0;
      const double model = f.a * std::exp(-t2 / (4.0 * theta0 * theta0)) +
                           f.b * std::exp(-t2 / (4.0 * s * s));
      f.residual += w * (c.values[i] - model) * (c.values[i] - model);
    }
    return f;
  };
  // Coarse log-spaced scan, then golden section around the best point.
  const int steps = 200;
  double best = s_lo;
  double best_res = std::numeric_limits<double>::infinity();
  const double ratio = std::log(s_hi / s_lo);
  for (int i = 0; i <= steps; ++i) {
    const double s = s_lo * std::exp(ratio * i / steps);
    const double res = solve(s).residual;
    if (res < best_res) {
      best_res = res;
      best = s;
    }
  }
  double a = std::max(s_lo, best * std::exp(-ratio / steps));
  double b = std::min(s_hi, best * std::exp(ratio / steps));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = solve(x1).residual, f2 = solve(x2).residual;
  while (b - a > 1e-10 * b) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = solve(x1).residual;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = solve(x2).residual;
    }
  }
  return solve(0.5 * (a + b));
}

}  // namespace pairscatter::analysis
