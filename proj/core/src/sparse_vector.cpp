#include "tweetfuse/sparse_vector.hpp"

#include <cmath>
#include <string>

#include "tweetfuse/error.hpp"

namespace tweetfuse {

double SparseVector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(dim, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) dense[indices[k]] = values[k];
  return dense;
}

void SparseVector::validate() const {
  if (indices.size() != values.size()) throw ContractViolation("SparseVector: indices/values size mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dim) {
      throw ContractViolation("SparseVector: index " + std::to_string(indices[k]) + " >= dim " +
                              std::to_string(dim));
    }
    if (k > 0 && indices[k] <= indices[k - 1]) throw ContractViolation("SparseVector: indices not strictly increasing");
    if (!std::isfinite(values[k]) || values[k] == 0.0) {
      throw ContractViolation("SparseVector: stored value must be finite and non-zero");
    }
  }
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v;
  v.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      v.indices.push_back(i);
      v.values.push_back(dense[i]);
    }
  }
  return v;
}

}  // namespace tweetfuse
