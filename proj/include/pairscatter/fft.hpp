#pragma once

#include <span>

#include "pairscatter/field.hpp"

namespace pairscatter {

// In-place FFTW plans for one grid shape. Forward uses e^{-i q x}, inverse
// e^{+i q x}; neither is normalized. Construction and destruction take a
// process-wide lock (the FFTW planner is not thread-safe); execution is
// lock-free, so each worker owns its own FftPlan.
class FftPlan {
 public:
  explicit FftPlan(const TransverseGrid& grid);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&&) = delete;

  const TransverseGrid& grid() const { return grid_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;
  void forward(ComplexField& f) const { forward(f.values()); }
  void inverse(ComplexField& f) const { inverse(f.values()); }

 private:
  TransverseGrid grid_;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

}  // namespace pairscatter
