#include "pairscatter/accumulator.hpp"

#include <cmath>
#include <stdexcept>

#include "pairscatter/kernels.hpp"

namespace pairscatter {

void MomentAccumulator::add_abs2(std::span<const cplx> amplitude, double scale) {
  if (amplitude.size() != mean_.size()) throw std::invalid_argument("accumulator size mismatch");
  ++count_;
  kernels::active().welford_abs2(mean_.data(), m2_.data(), amplitude.data(), scale,
                                 1.0 / static_cast<double>(count_), mean_.size());
}

void MomentAccumulator::add(std::span<const double> samples) {
  if (samples.size() != mean_.size()) throw std::invalid_argument("accumulator size mismatch");
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double delta = samples[i] - mean_[i];
    mean_[i] += delta * inv;
    m2_[i] += delta * (samples[i] - mean_[i]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.bins() != bins()) throw std::invalid_argument("accumulator size mismatch");
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double wb = nb / n;
  const double cross = na * nb / n;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * wb;
    m2_[i] += other.m2_[i] + delta * delta * cross;
  }
  count_ += other.count_;
}

std::vector<double> MomentAccumulator::std_error() const {
  std::vector<double> se(mean_.size(), 0.0);
  if (count_ < 2) return se;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < se.size(); ++i) {
    se[i] = std::sqrt(std::max(m2_[i], 0.0) / (n - 1.0) / n);
  }
  return se;
}

}  // namespace pairscatter
