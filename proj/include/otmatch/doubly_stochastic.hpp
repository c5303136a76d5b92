#pragma once

#include <cstddef>

#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"

namespace otmatch {

inline constexpr double kDoublyStochasticTol = 1e-8;

// Largest |row sum - 1| or |column sum - 1|.
double marginal_deviation(const SquareMatrix& m);

// True when every entry is >= 0 and every marginal is within `tol` of 1.
bool is_doubly_stochastic(const SquareMatrix& m,
                          double tol = kDoublyStochasticTol);

// A nonnegative square matrix with unit row and column sums. Construction
// validates; the wrapped matrix is immutable afterwards.
class DoublyStochastic {
 public:
  // Throws std::invalid_argument if `m` violates the invariants at `tol`.
  explicit DoublyStochastic(SquareMatrix m, double tol = kDoublyStochasticTol);
  explicit DoublyStochastic(const Permutation& p);

  // All entries 1/n.
  static DoublyStochastic barycenter(std::size_t n);

  std::size_t order() const { return m_.order(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const SquareMatrix& matrix() const { return m_; }

 private:
  SquareMatrix m_;
};

}  // namespace otmatch
