#include "otmatch/permutation.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace otmatch {

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (std::size_t k = 0; k < map_.size(); ++k) {
    const std::size_t v = map_[k];
    if (v >= map_.size() || seen[v]) {
      std::ostringstream msg;
      msg << "Permutation: not a bijection (entry " << k << " = " << v
          << ", n = " << map_.size() << ")";
      throw std::invalid_argument(msg.str());
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) inv[map_[k]] = k;
  Permutation p;
  p.map_ = std::move(inv);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) {
    throw std::invalid_argument("Permutation::compose: length mismatch");
  }
  std::vector<std::size_t> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = map_[other.map_[k]];
  Permutation p;
  p.map_ = std::move(out);
  return p;
}

SquareMatrix Permutation::to_dense() const {
  SquareMatrix m(size());
  for (std::size_t k = 0; k < size(); ++k) m(map_[k], k) = 1.0;
  return m;
}

Permutation Permutation::from_dense(const SquareMatrix& m) {
  const std::size_t n = m.order();
  std::vector<std::size_t> map(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = m(i, j);
      if (x == 1.0) {
        if (map[j] != n) {
          throw std::invalid_argument("Permutation::from_dense: column has two ones");
        }
        map[j] = i;
      } else if (x != 0.0) {
        throw std::invalid_argument("Permutation::from_dense: entry not 0/1");
      }
    }
    if (map[j] == n) {
      throw std::invalid_argument("Permutation::from_dense: empty column");
    }
  }
  return Permutation(std::move(map));
}

}  // namespace otmatch
