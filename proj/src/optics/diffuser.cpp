#include <cmath>
#include <random>
#include <sstream>

#include "pairscatter/error.hpp"
#include "pairscatter/kernels.hpp"
#include "pairscatter/optics.hpp"

namespace pairscatter {

namespace {

constexpr double kFilterCutoffExponent = 39.0;  // e^-39 ~ 1.2e-17

// Uniform on (-1, 1) from the top 53 bits.
inline double symmetric_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// Circular complex Gaussian with E|w|^2 = 1 (Marsaglia polar method).
inline cplx complex_gaussian(std::mt19937_64& rng) {
  for (;;) {
    const double u = symmetric_uniform(rng);
    const double v = symmetric_uniform(rng);
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-std::log(s) / s);
      return {u * f, v * f};
    }
  }
}

}  // namespace

void check_sampling_rule(const TransverseGrid& grid, const DiffuserSpec& spec) {
  if (grid.dx() > spec.xi0() / 4.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "sampling rule violated: dx = " << grid.dx() << " exceeds xi0/4 = " << spec.xi0() / 4.0
        << " (xi0 = 1/(k theta0)); refine the grid";
    throw ConfigError(msg.str());
  }
}

DiffuserSynthesizer::DiffuserSynthesizer(const TransverseGrid& grid, const DiffuserSpec& spec)
    : grid_(grid), filter_(grid.size()) {
  check_sampling_rule(grid, spec);
  const double xi2 = spec.xi0() * spec.xi0();
  const std::size_t n = grid.n();
  double power = 0.0;
  for (std::size_t i = 0; i < filter_.size(); ++i) {
    double q2;
    if (grid.dim() == 1) {
      const double q = grid.momentum(i);
      q2 = q * q;
    } else {
      const double qx = grid.momentum(i % n);
      const double qy = grid.momentum(i / n);
      q2 = qx * qx + qy * qy;
    }
    // Below 1e-17 of the peak a mode cannot change any sum at double
    // precision; those modes are skipped so they cost no random draws.
    const double a = 0.5 * q2 * xi2;
    filter_[i] = a > kFilterCutoffExponent ? 0.0 : std::exp(-a);
    power += filter_[i] * filter_[i];
  }
  // V(x) = sum_q filter(q) w_q e^{iqx}  =>  E|V|^2 = sum_q filter(q)^2.
  const double c = 1.0 / std::sqrt(power);
  for (auto& f : filter_) f *= c;
}

void DiffuserSynthesizer::spectrum(std::uint64_t seed, std::span<cplx> out) const {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = filter_[i] == 0.0 ? cplx(0.0, 0.0) : complex_gaussian(rng) * filter_[i];
  }
}

void DiffuserSynthesizer::synthesize(std::uint64_t seed, std::span<cplx> out,
                                     const FftPlan& fft) const {
  spectrum(seed, out);
  fft.inverse(out);
}

DiffuserMask DiffuserSynthesizer::synthesize(std::uint64_t seed, const FftPlan& fft) const {
  DiffuserMask mask{ComplexField(grid_), seed};
  synthesize(seed, mask.at_omega.values(), fft);
  return mask;
}

DiffuserMask synthesize_diffuser(const TransverseGrid& grid, const DiffuserSpec& spec,
                                 std::uint64_t seed) {
  const FftPlan fft(grid);
  return DiffuserSynthesizer(grid, spec).synthesize(seed, fft);
}

ComplexField mask_at_2omega(const DiffuserMask& mask) {
  ComplexField out(mask.at_omega.grid());
  kernels::csquare(out.values(), mask.at_omega.values());
  return out;
}

ComplexField apply_mask(const ComplexField& field, const ComplexField& mask) {
  if (!(field.grid() == mask.grid())) throw ConfigError("apply_mask: field and mask grids differ");
  ComplexField out(field.grid());
  kernels::active().cmul(out.data(), field.data(), mask.data(), field.size());
  return out;
}

}  // namespace pairscatter
