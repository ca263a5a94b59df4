#include <cmath>

#include "pairscatter/error.hpp"
#include "pairscatter/kernels.hpp"
#include "pairscatter/optics.hpp"

namespace pairscatter {

FresnelKernel::FresnelKernel(const TransverseGrid& grid, double distance, double kappa)
    : distance_(distance), kappa_(kappa), phase_(grid.size()), phase_unscaled_(grid.size()) {
  if (!(kappa > 0.0)) throw ConfigError("propagation wavenumber must be positive");
  const std::size_t n = grid.n();
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  const double coeff = kFresnelSign * distance / (2.0 * kappa);
  auto phase_of = [&](double q2) { return cplx(std::cos(coeff * q2), std::sin(coeff * q2)); };
  if (grid.dim() == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      const double q = grid.momentum(j);
      phase_unscaled_[j] = phase_of(q * q);
    }
  } else {
    for (std::size_t jy = 0; jy < n; ++jy) {
      const double qy = grid.momentum(jy);
      for (std::size_t jx = 0; jx < n; ++jx) {
        const double qx = grid.momentum(jx);
        phase_unscaled_[jy * n + jx] = phase_of(qx * qx + qy * qy);
      }
    }
  }
  for (std::size_t i = 0; i < phase_.size(); ++i) phase_[i] = phase_unscaled_[i] * inv_n;
}

void FresnelKernel::apply(std::span<cplx> field, const FftPlan& fft) const {
  fft.forward(field);
  kernels::cmul_inplace(field, phase_);
  fft.inverse(field);
}

void FresnelKernel::apply_spectrum(std::span<cplx> spectrum) const {
  kernels::cmul_inplace(spectrum, phase_unscaled_);
}

ComplexField fresnel_propagate(const ComplexField& field, double distance, double kappa) {
  if (!(kappa > 0.0)) throw ConfigError("propagation wavenumber must be positive");
  ComplexField out = field;
  if (distance == 0.0) return out;
  const FftPlan fft(field.grid());
  FresnelKernel(field.grid(), distance, kappa).apply(out, fft);
  return out;
}

}  // namespace pairscatter
