#include "otmatch/doubly_stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace otmatch {

double marginal_deviation(const SquareMatrix& m) {
  const std::size_t n = m.order();
  std::vector<double> col(n, 0.0);
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      r += row[j];
      col[j] += row[j];
    }
    dev = std::max(dev, std::abs(r - 1.0));
  }
  for (double c : col) dev = std::max(dev, std::abs(c - 1.0));
  return dev;
}

bool is_doubly_stochastic(const SquareMatrix& m, double tol) {
  if (m.empty()) return false;
  if (m.min_value() < 0.0) return false;
  return marginal_deviation(m) <= tol;
}

DoublyStochastic::DoublyStochastic(SquareMatrix m, double tol)
    : m_(std::move(m)) {
  if (m_.empty()) {
    throw std::invalid_argument("DoublyStochastic: empty matrix");
  }
  if (m_.min_value() < 0.0) {
    throw std::invalid_argument("DoublyStochastic: negative entry");
  }
  const double dev = marginal_deviation(m_);
  if (dev > tol) {
    std::ostringstream msg;
    msg << "DoublyStochastic: marginal deviation " << dev
        << " exceeds tolerance " << tol;
    throw std::invalid_argument(msg.str());
  }
}

DoublyStochastic::DoublyStochastic(const Permutation& p)
    : DoublyStochastic(p.to_dense()) {}

DoublyStochastic DoublyStochastic::barycenter(std::size_t n) {
  return DoublyStochastic(SquareMatrix(n, 1.0 / static_cast<double>(n)));
}

}  // namespace otmatch
