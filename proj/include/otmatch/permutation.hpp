#pragma once

#include <cstddef>
#include <vector>

#include "otmatch/matrix.hpp"

namespace otmatch {

// A bijection on {0, ..., n-1}.
//
// Orientation used throughout the library: p relabels vertex k of the second
// graph as vertex p[k] of the first. The dense view has a single one per
// column, at (p[k], k), so permute_matrix(B, p) == P B P^T and
// qap_objective(A, B, p) == sum_kl A[p[k]][p[l]] * B[k][l].
class Permutation {
 public:
  Permutation() = default;

  // Throws std::invalid_argument unless `map` is a bijection on [0, n).
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t k) const { return map_[k]; }
  const std::vector<std::size_t>& map() const { return map_; }

  Permutation inverse() const;

  // (this o other)[k] = this[other[k]].
  Permutation compose(const Permutation& other) const;

  SquareMatrix to_dense() const;

  // Inverse of to_dense. Throws unless `m` is a 0/1 permutation matrix.
  static Permutation from_dense(const SquareMatrix& m);

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

}  // namespace otmatch
