#pragma once

#include <cstddef>
#include <vector>

namespace pairscatter {

// Discretized transverse plane. Positions are centred on the window,
// x_m = (m - n/2) dx; momenta follow the FFT ordering, q_j = j dq for
// j < n/2 and (j - n) dq otherwise, so the axis covers [-pi/dx, pi/dx).
class TransverseGrid {
 public:
  TransverseGrid(int dim, std::size_t n, double dx, double k);

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  double dx() const { return dx_; }
  double k() const { return k_; }

  double window() const { return static_cast<double>(n_) * dx_; }
  double dq() const;
  // Number of samples in the whole field, n^dim.
  std::size_t size() const { return dim_ == 1 ? n_ : n_ * n_; }

  // Coordinate of sample m along one axis.
  double position(std::size_t m) const;
  // Momentum of FFT bin j along one axis. Every module reads momenta
  // through this accessor.
  double momentum(std::size_t j) const;
  // FFT bin holding momentum q, or -1 when q is not on the lattice
  // (relative tolerance 1e-9 of dq).
  long lattice_index(double q) const;

  // Momentum bins sorted by increasing q (fftshift order).
  std::vector<std::size_t> sorted_momentum_bins() const;

  bool operator==(const TransverseGrid&) const = default;

 private:
  int dim_;
  std::size_t n_;
  double dx_;
  double k_;
};

TransverseGrid make_grid(int dim, std::size_t n, double dx, double k);

bool is_power_of_two(std::size_t n);

}  // namespace pairscatter
