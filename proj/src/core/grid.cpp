#include "pairscatter/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pairscatter/error.hpp"

namespace pairscatter {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

TransverseGrid::TransverseGrid(int dim, std::size_t n, double dx, double k)
    : dim_(dim), n_(n), dx_(dx), k_(k) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (!is_power_of_two(n) || n < 2) {
    throw ConfigError("grid size n must be a power of two, got " + std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw ConfigError("grid pitch dx must be positive");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ConfigError("wavenumber k must be positive");
  }
}

double TransverseGrid::dq() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_);
}

double TransverseGrid::position(std::size_t m) const {
  return (static_cast<double>(m) - static_cast<double>(n_ / 2)) * dx_;
}

double TransverseGrid::momentum(std::size_t j) const {
  const auto half = n_ / 2;
  const double idx = j < half ? static_cast<double>(j)
                              : static_cast<double>(j) - static_cast<double>(n_);
  return idx * dq();
}

long TransverseGrid::lattice_index(double q) const {
  const double r = q / dq();
  const double nearest = std::round(r);
  if (std::abs(r - nearest) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
  const long half = static_cast<long>(n_ / 2);
  const long i = static_cast<long>(nearest);
  if (i < -half || i >= half) return -1;
  return i >= 0 ? i : i + static_cast<long>(n_);
}

std::vector<std::size_t> TransverseGrid::sorted_momentum_bins() const {
  std::vector<std::size_t> bins(n_);
  const auto half = n_ / 2;
  for (std::size_t i = 0; i < n_; ++i) bins[i] = (i + half) % n_;
  return bins;
}

TransverseGrid make_grid(int dim, std::size_t n, double dx, double k) {
  return TransverseGrid(dim, n, dx, k);
}

}  // namespace pairscatter
