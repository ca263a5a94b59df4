#pragma once

#include <cstdint>
#include <vector>

#include "pairscatter/grid.hpp"
#include "pairscatter/specs.hpp"

namespace pairscatter {

// Ensemble + translation average of the mask correlation along x,
//   c(dr) = < V(r + dr) V*(r) >,
// at omega and 2 omega, on lags 0, dx, ..., up to max_lag.
struct MaskCorrelation {
  std::vector<double> lag;
  std::vector<double> omega;        // Re c at omega
  std::vector<double> two_omega;    // Re c at 2 omega
  std::vector<double> target;       // exp(-dr^2 / 4 xi0^2)
  double mean_intensity = 0.0;      // <|V|^2>
  // RMS of (omega - target); target(0) = 1, so this is relative.
  double rms_omega = 0.0;
  // RMS of (two_omega - 2 omega^2) / 2, relative to the zero-lag value 2.
  double rms_two_omega = 0.0;
};

MaskCorrelation estimate_mask_correlation(const TransverseGrid& grid, const DiffuserSpec& spec,
                                          std::uint64_t n_masks, std::uint64_t master_seed,
                                          double max_lag_in_xi0 = 3.0);

// Self-checks of the Fresnel propagator on one grid.
struct PropagatorReport {
  double norm_drift = 0.0;        // |‖H f‖² / ‖f‖² - 1|, worst of the applications
  double semigroup_error = 0.0;   // ‖H(a) H(b) f - H(a+b) f‖ / ‖f‖
  double inverse_error = 0.0;     // ‖H(-s) H(s) f - f‖ / ‖f‖
  double width_error = 0.0;       // worst relative error of the Gaussian-beam width
  double rayleigh_lengths = 0.0;  // farthest propagation tested, in Rayleigh lengths
};

// kappa is the propagation wavenumber, waist the test beam's 1/e field
// radius. The beam is propagated to 0.5, 1, 2 and 3 Rayleigh lengths. The
// algebraic checks use distances `distance` and distance/2 on a random
// field. Rounding of the Fresnel phase q^2 s / 2 kappa sets their floor,
// so pass the distances the engine actually uses.
PropagatorReport check_propagator(const TransverseGrid& grid, double kappa, double waist,
                                  double distance, std::uint64_t seed = 7);

}  // namespace pairscatter
