#include "pairscatter/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace pairscatter {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan make_plan(const TransverseGrid& grid, fftw_complex* buf, int sign) {
  const int n = static_cast<int>(grid.n());
  // FFTW_ESTIMATE keeps plan selection independent of timing, which the
  // bit-reproducibility contract relies on.
  if (grid.dim() == 1) return fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  return fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
}

}  // namespace

FftPlan::FftPlan(const TransverseGrid& grid) : grid_(grid) {
  CplxVector scratch(grid.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  fwd_ = make_plan(grid, buf, FFTW_FORWARD);
  inv_ = make_plan(grid, buf, FFTW_BACKWARD);
  if (fwd_ == nullptr || inv_ == nullptr) throw std::runtime_error("FFTW plan creation failed");
}

FftPlan::FftPlan(FftPlan&& other) noexcept
    : grid_(other.grid_), fwd_(other.fwd_), inv_(other.inv_) {
  other.fwd_ = nullptr;
  other.inv_ = nullptr;
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void FftPlan::forward(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void FftPlan::inverse(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inv_), p, p);
}

}  // namespace pairscatter
