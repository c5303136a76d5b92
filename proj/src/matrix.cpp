#include "otmatch/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace otmatch {

SquareMatrix::SquareMatrix(std::size_t n, double fill)
    : n_(n), data_(n * n, fill) {
  if (!std::isfinite(fill)) {
    throw std::invalid_argument("SquareMatrix: non-finite fill value");
  }
}

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), data_(std::move(entries)) {
  if (data_.size() != n * n) {
    std::ostringstream msg;
    msg << "SquareMatrix: expected " << n * n << " entries for order " << n
        << ", got " << data_.size();
    throw std::invalid_argument(msg.str());
  }
  if (!all_finite()) {
    throw std::invalid_argument("SquareMatrix: non-finite entry");
  }
}

SquareMatrix SquareMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) {
      throw std::invalid_argument("SquareMatrix::from_rows: ragged rows");
    }
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return SquareMatrix(n, std::move(entries));
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool SquareMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool SquareMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

double SquareMatrix::sum() const {
  double s = 0.0;
  for (double x : data_) s += x;
  return s;
}

double SquareMatrix::frobenius_norm_squared() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return s;
}

double SquareMatrix::min_value() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double SquareMatrix::max_value() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& other) {
  require_same_order("SquareMatrix::operator+=", {n_, other.n_});
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& other) {
  require_same_order("SquareMatrix::operator-=", {n_, other.n_});
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
  a += b;
  return a;
}

SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
  a -= b;
  return a;
}

SquareMatrix operator*(double s, SquareMatrix a) {
  a *= s;
  return a;
}

double inner(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_order("inner", {a.order(), b.order()});
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_order("max_abs_diff", {a.order(), b.order()});
  const auto x = a.values();
  const auto y = b.values();
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

void require_same_order(const char* what,
                        std::initializer_list<std::size_t> orders) {
  if (orders.size() < 2) return;
  const std::size_t first = *orders.begin();
  bool ok = std::all_of(orders.begin(), orders.end(),
                        [first](std::size_t n) { return n == first; });
  if (ok) return;
  std::ostringstream msg;
  msg << what << ": dimension mismatch (orders";
  for (std::size_t n : orders) msg << ' ' << n;
  msg << ')';
  throw std::invalid_argument(msg.str());
}

}  // namespace otmatch
