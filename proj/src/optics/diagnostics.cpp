#include "pairscatter/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pairscatter/error.hpp"
#include "pairscatter/fft.hpp"
#include "pairscatter/optics.hpp"
#include "pairscatter/seed.hpp"

namespace pairscatter {

MaskCorrelation estimate_mask_correlation(const TransverseGrid& grid, const DiffuserSpec& spec,
                                          std::uint64_t n_masks, std::uint64_t master_seed,
                                          double max_lag_in_xi0) {
  if (n_masks == 0) throw ConfigError("mask statistics need at least one mask");
  const DiffuserSynthesizer synth(grid, spec);
  const FftPlan fft(grid);
  const std::size_t n = grid.n();
  const std::size_t max_lag = std::min<std::size_t>(
      n / 2, static_cast<std::size_t>(std::floor(max_lag_in_xi0 * spec.xi0() / grid.dx() + 1e-9)));

  std::vector<double> c1(max_lag + 1, 0.0), c2(max_lag + 1, 0.0);
  ComplexField v(grid);
  CplxVector v2(grid.size());
  for (std::uint64_t m = 0; m < n_masks; ++m) {
    synth.synthesize(realization_seed(master_seed, m), v.values(), fft);
    for (std::size_t i = 0; i < v2.size(); ++i) v2[i] = v[i] * v[i];
    // Lag along x within each row; rows (2D) add to the translation average.
    for (std::size_t l = 0; l <= max_lag; ++l) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t row = i - i % n;
        const std::size_t j = row + (i % n + l) % n;
        s1 += (v[j] * std::conj(v[i])).real();
        s2 += (v2[j] * std::conj(v2[i])).real();
      }
      c1[l] += s1;
      c2[l] += s2;
    }
  }
  const double norm = 1.0 / (static_cast<double>(n_masks) * static_cast<double>(grid.size()));
  MaskCorrelation out;
  const double xi0 = spec.xi0();
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t l = 0; l <= max_lag; ++l) {
    const double dr = static_cast<double>(l) * grid.dx();
    const double a = c1[l] * norm;
    const double b = c2[l] * norm;
    const double t = std::exp(-dr * dr / (4.0 * xi0 * xi0));
    out.lag.push_back(dr);
    out.omega.push_back(a);
    out.two_omega.push_back(b);
    out.target.push_back(t);
    e1 += (a - t) * (a - t);
    e2 += 0.25 * (b - 2.0 * a * a) * (b - 2.0 * a * a);
  }
  out.mean_intensity = out.omega.front();
  out.rms_omega = std::sqrt(e1 / static_cast<double>(out.lag.size()));
  out.rms_two_omega = std::sqrt(e2 / static_cast<double>(out.lag.size()));
  return out;
}

namespace {

double norm2(const ComplexField& f) {
  double s = 0.0;
  for (const cplx& c : f.values()) s += std::norm(c);
  return s;
}

double l2_distance(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

// 1/e field radius from the second moment of |E|^2 along x.
double beam_radius(const ComplexField& f) {
  const auto& g = f.grid();
  const std::size_t n = g.n();
  double s = 0.0, sx2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.position(i % n);
    const double e = std::norm(f[i]);
    s += e;
    sx2 += e * x * x;
  }
  return 2.0 * std::sqrt(sx2 / s);
}

}  // namespace

PropagatorReport check_propagator(const TransverseGrid& grid, double kappa, double waist,
                                  double distance, std::uint64_t seed) {
  if (!(waist > 0.0)) throw ConfigError("test beam waist must be positive");
  if (!(distance > 0.0)) throw ConfigError("test distance must be positive");
  PropagatorReport r;
  const std::size_t n = grid.n();

  // Speckle-like random field for the algebraic checks.
  ComplexField f(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (auto& c : f.values()) c = cplx(gauss(rng), gauss(rng));
  const double f_norm = std::sqrt(norm2(f));
  const double zr = 0.5 * kappa * waist * waist;
  const double a = distance, b = 0.5 * distance;

  const ComplexField fa = fresnel_propagate(f, a, kappa);
  const ComplexField fab = fresnel_propagate(fa, b, kappa);
  const ComplexField f_sum = fresnel_propagate(f, a + b, kappa);
  const ComplexField back = fresnel_propagate(fa, -a, kappa);
  r.norm_drift = std::max({std::abs(norm2(fa) / norm2(f) - 1.0), std::abs(norm2(fab) / norm2(f) - 1.0),
                           std::abs(norm2(f_sum) / norm2(f) - 1.0)});
  r.semigroup_error = l2_distance(fab, f_sum) / f_norm;
  r.inverse_error = l2_distance(back, f) / f_norm;

  ComplexField beam(grid);
  for (std::size_t i = 0; i < beam.size(); ++i) {
    const double x = grid.position(i % n);
    const double y = grid.dim() == 2 ? grid.position(i / n) : 0.0;
    beam[i] = std::exp(-(x * x + y * y) / (waist * waist));
  }
  const double w0 = beam_radius(beam);
  for (double m : {0.5, 1.0, 2.0, 3.0}) {
    const double s = m * zr;
    const double expected = w0 * std::sqrt(1.0 + m * m);
    const double got = beam_radius(fresnel_propagate(beam, s, kappa));
    r.width_error = std::max(r.width_error, std::abs(got / expected - 1.0));
    r.rayleigh_lengths = m;
  }
  return r;
}

}  // namespace pairscatter
