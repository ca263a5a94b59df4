#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pairscatter/field.hpp"

namespace pairscatter {

// Per-bin streaming mean and sum of squared deviations (Welford), with the
// pairwise merge of Chan et al. Merging is exact-arithmetic associative;
// bitwise reproducibility comes from always merging in the same tree.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;
  explicit MomentAccumulator(std::size_t bins) : mean_(bins, 0.0), m2_(bins, 0.0) {}

  std::size_t bins() const { return mean_.size(); }
  std::uint64_t count() const { return count_; }

  // Adds one sample per bin, x_i = |amplitude_i|^2 * scale.
  void add_abs2(std::span<const cplx> amplitude, double scale);
  void add(std::span<const double> samples);
  void merge(const MomentAccumulator& other);

  std::span<const double> mean() const { return mean_; }
  std::span<const double> m2() const { return m2_; }
  // Standard error of the mean per bin; zero when count < 2.
  std::vector<double> std_error() const;

 private:
  std::uint64_t count_ = 0;
  RealVector mean_;
  RealVector m2_;
};

// Folds a sequence of partial results in a fixed binary tree determined only
// by their order: results are pushed in index order and equal-height
// neighbours are merged eagerly, like a binary counter. T needs
// `void merge(const T&)`.
template <typename T>
class OrderedTreeReducer {
 public:
  void push(T value) {
    ++pushed_;
    Node node{0, std::move(value)};
    while (!stack_.empty() && stack_.back().height == node.height) {
      Node left = std::move(stack_.back());
      stack_.pop_back();
      left.value.merge(node.value);
      node = Node{left.height + 1, std::move(left.value)};
    }
    stack_.push_back(std::move(node));
  }

  T finish() {
    if (stack_.empty()) throw std::logic_error("OrderedTreeReducer::finish on an empty reducer");
    T result = std::move(stack_.back().value);
    stack_.pop_back();
    while (!stack_.empty()) {
      T left = std::move(stack_.back().value);
      stack_.pop_back();
      left.merge(result);
      result = std::move(left);
    }
    return result;
  }

  bool empty() const { return stack_.empty(); }
  std::size_t pushed() const { return pushed_; }

 private:
  struct Node {
    int height;
    T value;
  };
  std::vector<Node> stack_;
  std::size_t pushed_ = 0;
};

}  // namespace pairscatter
