#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tweetfuse {

/// Sorted-index sparse vector. Invariants: indices strictly increasing and
/// < dim, values finite and non-zero.
struct SparseVector {
  std::vector<std::size_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  std::size_t nnz() const { return indices.size(); }
  double norm() const;
  std::vector<double> to_dense() const;

  /// Throws ContractViolation when an invariant does not hold.
  void validate() const;

  static SparseVector zeros(std::size_t dim) { return SparseVector{{}, {}, dim}; }
  static SparseVector from_dense(std::span<const double> dense);
};

}  // namespace tweetfuse
