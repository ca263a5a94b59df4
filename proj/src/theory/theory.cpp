#include "pairscatter/theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pairscatter/error.hpp"

namespace pairscatter::theory {

double TheoryParams::dtheta_plus() const { return 1.0 / (kd_theta0() * (1.0 - z / d)); }

double TheoryParams::dtheta_minus1() const {
  return 1.0 / (kd_theta0() * (1.0 + 2.0 * std::abs(z) / d));
}

double TheoryParams::dtheta_minus2() const {
  const double zt = z_tilde();
  return std::sqrt(1.0 + zt * zt) / (kd_theta0() * std::sqrt(1.0 + 2.0 * std::abs(z) / d));
}

double TheoryParams::minus2_weight() const {
  const double zt = z_tilde();
  return std::pow(1.0 + zt * zt, weight_exponent);
}

double TheoryParams::minus2_envelope_width() const {
  const double zt2 = z_tilde() * z_tilde();
  return theta0 * std::sqrt((1.0 + zt2) / (1.0 + 3.0 * zt2));
}

double default_weight_exponent(int) { return -0.5; }

TheoryParams make_params(double k, double d, double z, double theta0, int dim) {
  TheoryParams p;
  p.k = k;
  p.d = d;
  p.z = z;
  p.theta0 = theta0;
  p.dim = dim;
  p.weight_exponent = default_weight_exponent(dim);
  return p;
}

void check(const TheoryParams& p, Variant variant) {
  if (!(p.k > 0.0)) throw ConfigError("theory: k must be positive");
  if (!(p.d > 0.0)) throw ConfigError("theory: d must be positive");
  if (!(p.theta0 > 0.0) || !std::isfinite(p.theta0)) {
    throw ConfigError("theory: theta0 must be positive (theta0 -> 0 has no scattering regime)");
  }
  if (p.dim != 1 && p.dim != 2) throw ConfigError("theory: dim must be 1 or 2");
  if (variant == Variant::kPlus) {
    if (p.z < 0.0) throw ConfigError("theory: PLUS requires z >= 0");
    if (p.z > 0.5 * p.d * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "theory: PLUS requires z <= d/2 (got z/d = " << p.z / p.d << ")";
      throw ConfigError(msg.str());
    }
  } else if (p.z > 0.0) {
    throw ConfigError("theory: MINUS requires z <= 0");
  }
}

double f_omega(double q, const TheoryParams& p) {
  const double xi = p.xi0();
  return std::exp(-q * q * xi * xi);
}

double f_2omega(double q, const TheoryParams& p) {
  const double xi = p.xi0();
  return std::pow(2.0, 1.0 - 0.5 * p.dim) * std::exp(-0.5 * q * q * xi * xi);
}

namespace {

// All closed forms are written in terms of these scalar invariants so the
// 1D and 2D entry points share one implementation:
//   sum2  = |theta_a + theta_b|^2, diff2 = |theta_a - theta_b|^2,
//   a2 = |theta_a|^2, b2 = |theta_b|^2, ab = theta_a . theta_b
struct Invariants {
  double sum2, diff2, a2, b2, ab;
};

Invariants invariants(Angle2 a, Angle2 b) {
  const double sx = a.x + b.x, sy = a.y + b.y;
  const double dx = a.x - b.x, dy = a.y - b.y;
  return {sx * sx + sy * sy, dx * dx + dy * dy, a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y,
          a.x * b.x + a.y * b.y};
}

GammaTerms plus_terms(const Invariants& v, const TheoryParams& p) {
  check(p, Variant::kPlus);
  const double t0 = p.theta0;
  const double dt = p.dtheta_plus();
  const double envelope = 2.0 * std::exp(-v.sum2 / (4.0 * t0 * t0));
  const double bunching = std::exp(-v.diff2 / (2.0 * dt * dt));
  GammaTerms g;
  g.background = envelope;
  g.peak = envelope * bunching;
  g.total = g.background + g.peak;
  return g;
}

GammaTerms minus_terms(const Invariants& v, const TheoryParams& p) {
  check(p, Variant::kMinus);
  const double t0 = p.theta0;
  const double zt2 = p.z_tilde() * p.z_tilde();
  const double d1 = p.dtheta_minus1();
  const double d2 = p.dtheta_minus2();

  const double env1 = std::exp(-v.sum2 / (4.0 * t0 * t0));
  const double peak1 = env1 * std::exp(-v.diff2 / (2.0 * d1 * d1));

  const double exponent2 =
      (v.sum2 + zt2 * (3.0 * v.a2 + 3.0 * v.b2 - 2.0 * v.ab)) / (4.0 * (1.0 + zt2) * t0 * t0);
  const double env2 = p.minus2_weight() * std::exp(-exponent2);
  const double peak2 = env2 * std::exp(-v.diff2 / (2.0 * d2 * d2));

  GammaTerms g;
  g.minus1 = env1 + peak1;
  g.minus2 = env2 + peak2;
  g.background = env1 + env2;
  g.peak = peak1 + peak2;
  g.total = g.minus1 + g.minus2;
  return g;
}

}  // namespace

GammaTerms gamma_plus_terms(double ta, double tb, const TheoryParams& p) {
  return plus_terms(invariants({ta, 0.0}, {tb, 0.0}), p);
}
GammaTerms gamma_minus_terms(double ta, double tb, const TheoryParams& p) {
  return minus_terms(invariants({ta, 0.0}, {tb, 0.0}), p);
}
GammaTerms gamma_plus_terms(Angle2 ta, Angle2 tb, const TheoryParams& p) {
  return plus_terms(invariants(ta, tb), p);
}
GammaTerms gamma_minus_terms(Angle2 ta, Angle2 tb, const TheoryParams& p) {
  return minus_terms(invariants(ta, tb), p);
}
GammaTerms gamma_terms(double ta, double tb, const TheoryParams& p, Variant v) {
  return v == Variant::kPlus ? gamma_plus_terms(ta, tb, p) : gamma_minus_terms(ta, tb, p);
}

namespace {

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::numbers::ln2);

// Half-width at half maximum of the MINUS enhancement along theta_a = 0.
// The peak sum is strictly decreasing in |theta|, so bisection is safe.
double minus_half_width(const TheoryParams& p) {
  auto peak = [&](double t) { return gamma_minus_terms(0.0, t, p).peak; };
  const double half = 0.5 * peak(0.0);
  double lo = 0.0;
  double hi = 2.0 * std::max(p.dtheta_minus1(), p.dtheta_minus2());
  while (peak(hi) > half) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (peak(mid) > half ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double theory_peak_width(const TheoryParams& p, Variant v) {
  check(p, v);
  if (v == Variant::kPlus) return kFwhmPerSigma * p.dtheta_plus();
  return 2.0 * minus_half_width(p);
}

double theory_width_max_location(const TheoryParams& p, double zt_max) {
  if (!(p.theta0 > 0.0)) throw ConfigError("theory: theta0 must be positive");
  if (p.k * p.d * p.theta0 * p.theta0 <= 1.0) {
    throw ConfigError("theory: width maximum requires d/z0 = k d theta0^2 > 1");
  }
  auto width_at = [&](double zt) {
    TheoryParams q = p;
    q.z = -zt * p.z0();
    return theory_peak_width(q, Variant::kMinus);
  };
  const int steps = 2000;
  double best_zt = 0.0, best_w = width_at(0.0);
  for (int i = 1; i <= steps; ++i) {
    const double zt = zt_max * i / steps;
    const double w = width_at(zt);
    if (w > best_w) {
      best_w = w;
      best_zt = zt;
    }
  }
  const double h = zt_max / steps;
  double a = std::max(0.0, best_zt - h);
  double b = std::min(zt_max, best_zt + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double wc = width_at(c), we = width_at(e);
  while (b - a > 1e-7 * std::max(1.0, best_zt)) {
    if (wc > we) {
      b = e;
      e = c;
      we = wc;
      c = b - inv_phi * (b - a);
      wc = width_at(c);
    } else {
      a = c;
      c = e;
      wc = we;
      e = a + inv_phi * (b - a);
      we = width_at(e);
    }
  }
  return 0.5 * (a + b);
}

TheoryCurve theory_curve(std::span<const double> theta_axis, const TheoryParams& p, Variant v,
                         double theta_a) {
  check(p, v);
  TheoryCurve c;
  c.theta.assign(theta_axis.begin(), theta_axis.end());
  for (double t : theta_axis) {
    const GammaTerms g = gamma_terms(theta_a, theta_a + t, p, v);
    c.total.push_back(g.total);
    c.peak.push_back(g.peak);
    c.background.push_back(g.background);
    c.minus1.push_back(g.minus1);
    c.minus2.push_back(g.minus2);
  }
  return c;
}

std::vector<double> theory_background(std::span<const double> theta_axis, const TheoryParams& p,
                                      Variant v, double theta_a) {
  return theory_curve(theta_axis, p, v, theta_a).background;
}

}  // namespace pairscatter::theory
