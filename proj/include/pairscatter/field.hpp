#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "pairscatter/grid.hpp"

namespace pairscatter {

using cplx = std::complex<double>;

// 64-byte aligned storage so FFTW and the AVX2 kernels always see the same
// alignment (FFTW picks codelets by alignment; results would otherwise differ).
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), kAlign));
  }
  void deallocate(T* p, std::size_t) { ::operator delete(p, kAlign); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using CplxVector = std::vector<cplx, AlignedAllocator<cplx>>;
using RealVector = std::vector<double, AlignedAllocator<double>>;

// Complex scalar field on a transverse grid, stored row-major in position
// order (or FFT order when a routine says it holds a spectrum).
class ComplexField {
 public:
  explicit ComplexField(const TransverseGrid& grid, cplx fill = {0.0, 0.0})
      : grid_(grid), values_(grid.size(), fill) {}

  const TransverseGrid& grid() const { return grid_; }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx* data() { return values_.data(); }
  const cplx* data() const { return values_.data(); }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  // Sum |v|^2 dx^dim.
  double norm2() const;

 private:
  TransverseGrid grid_;
  CplxVector values_;
};

}  // namespace pairscatter
