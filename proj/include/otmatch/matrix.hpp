#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace otmatch {

// Dense n x n real matrix, row-major. Every entry is finite.
class SquareMatrix {
 public:
  SquareMatrix() = default;

  // n x n matrix filled with `fill`.
  explicit SquareMatrix(std::size_t n, double fill = 0.0);

  // Takes ownership of n*n row-major entries. Throws std::invalid_argument on
  // a size mismatch or a non-finite entry.
  SquareMatrix(std::size_t n, std::vector<double> entries);

  static SquareMatrix from_rows(
      const std::vector<std::vector<double>>& rows);
  static SquareMatrix identity(std::size_t n);

  std::size_t order() const { return n_; }
  bool empty() const { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * n_, n_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  SquareMatrix transposed() const;
  bool is_symmetric(double tol = 0.0) const;
  bool all_finite() const;

  double sum() const;
  double frobenius_norm_squared() const;
  double min_value() const;
  double max_value() const;

  SquareMatrix& operator+=(const SquareMatrix& other);
  SquareMatrix& operator-=(const SquareMatrix& other);
  SquareMatrix& operator*=(double s);

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator*(double s, SquareMatrix a);

// Frobenius inner product sum_ij a_ij b_ij.
double inner(const SquareMatrix& a, const SquareMatrix& b);

// Largest |a_ij - b_ij|.
double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b);

// Throws std::invalid_argument unless every matrix has order n.
void require_same_order(const char* what,
                        std::initializer_list<std::size_t> orders);

}  // namespace otmatch
