#pragma once

#include <cstdint>
#include <span>

#include "pairscatter/fft.hpp"
#include "pairscatter/field.hpp"
#include "pairscatter/specs.hpp"

namespace pairscatter {

// Sign of the Fresnel phase: forward propagation over s multiplies the
// angular spectrum by exp(kFresnelSign * i q^2 s / 2 kappa). Every
// propagation path (pump, pair, transposed detection mode) goes through
// FresnelKernel, so this is the only place the convention lives.
inline constexpr double kFresnelSign = +1.0;

// Precomputed transfer function for one (grid, distance, wavenumber). The
// table already includes the 1/N of the inverse transform, so apply() is
// forward FFT, one complex multiply, inverse FFT.
class FresnelKernel {
 public:
  FresnelKernel(const TransverseGrid& grid, double distance, double kappa);

  double distance() const { return distance_; }
  double kappa() const { return kappa_; }
  bool is_identity() const { return distance_ == 0.0; }

  // Propagates a position-space field in place.
  void apply(std::span<cplx> field, const FftPlan& fft) const;
  void apply(ComplexField& field, const FftPlan& fft) const { apply(field.values(), fft); }
  // Multiplies an angular spectrum (FFT order) by the unnormalized phase.
  void apply_spectrum(std::span<cplx> spectrum) const;

 private:
  double distance_;
  double kappa_;
  CplxVector phase_;            // exp(i q^2 s/2kappa) / N
  CplxVector phase_unscaled_;   // exp(i q^2 s/2kappa)
};

ComplexField fresnel_propagate(const ComplexField& field, double distance, double kappa);

// One draw of the diffuser: V(omega) in position space and the seed it came
// from.
struct DiffuserMask {
  ComplexField at_omega;
  std::uint64_t realization_seed;
};

// Reusable mask generator for a fixed grid and diffuser. White complex
// Gaussian noise in momentum space is shaped by exp(-q^2 xi0^2 / 2) and
// inverse-transformed; the amplitude is scaled so that <|V|^2> = 1 over
// the ensemble (not per realization), giving the Gaussian power spectrum
// F(q) ~ exp(-q^2 xi0^2) and correlation exp(-|dr|^2 / 4 xi0^2).
class DiffuserSynthesizer {
 public:
  DiffuserSynthesizer(const TransverseGrid& grid, const DiffuserSpec& spec);

  const TransverseGrid& grid() const { return grid_; }

  // Coefficients S with V = IFFT(S) (unnormalized inverse), FFT order.
  void spectrum(std::uint64_t seed, std::span<cplx> out) const;
  void synthesize(std::uint64_t seed, std::span<cplx> out, const FftPlan& fft) const;
  DiffuserMask synthesize(std::uint64_t seed, const FftPlan& fft) const;

 private:
  TransverseGrid grid_;
  RealVector filter_;  // normalized amplitude filter in FFT order
};

// Throws ConfigError when dx > xi0/4.
void check_sampling_rule(const TransverseGrid& grid, const DiffuserSpec& spec);

DiffuserMask synthesize_diffuser(const TransverseGrid& grid, const DiffuserSpec& spec,
                                 std::uint64_t seed);

// V(2 omega) = V(omega)^2 (no material dispersion).
ComplexField mask_at_2omega(const DiffuserMask& mask);

// Pointwise transmission through a thin screen. Throws ConfigError on grid
// mismatch.
ComplexField apply_mask(const ComplexField& field, const ComplexField& mask);

}  // namespace pairscatter
