#include "otmatch/samplers.hpp"

#include <numeric>
#include <stdexcept>

#include "otmatch/objective.hpp"

namespace otmatch {

std::size_t SbmSpec::vertex_count() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
}

void SbmSpec::validate() const {
  const std::size_t k = block_sizes.size();
  if (k == 0) throw std::invalid_argument("SbmSpec: no blocks");
  if (block_probs.size() != k) {
    throw std::invalid_argument("SbmSpec: block_probs must be k x k");
  }
  for (std::size_t s : block_sizes) {
    if (s == 0) throw std::invalid_argument("SbmSpec: empty block");
  }
  for (std::size_t r = 0; r < k; ++r) {
    if (block_probs[r].size() != k) {
      throw std::invalid_argument("SbmSpec: block_probs must be k x k");
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double p = block_probs[r][c];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("SbmSpec: probability outside [0, 1]");
      }
      if (p != block_probs[c][r]) {
        throw std::invalid_argument("SbmSpec: block_probs must be symmetric");
      }
    }
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("SbmSpec: rho outside [0, 1]");
  }
}

GraphPair sample_sbm_pair(const SbmSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = spec.vertex_count();
  std::vector<std::size_t> block(n);
  {
    std::size_t v = 0;
    for (std::size_t r = 0; r < spec.block_sizes.size(); ++r) {
      for (std::size_t t = 0; t < spec.block_sizes[r]; ++t) block[v++] = r;
    }
  }
  GraphPair g{SquareMatrix(n), SquareMatrix(n)};
  const double rho = spec.rho;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = spec.block_probs[block[i]][block[j]];
      const bool ea = rng.bernoulli(p);
      // p + rho (1 - p) written so rho = 1 gives exactly 1.
      const bool eb =
          rng.bernoulli(ea ? 1.0 - (1.0 - p) * (1.0 - rho) : p * (1.0 - rho));
      if (ea) g.a(i, j) = g.a(j, i) = 1.0;
      if (eb) g.b(i, j) = g.b(j, i) = 1.0;
    }
  }
  return g;
}

GraphPair sample_er_pair(std::size_t n, double p, double rho, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_er_pair: n must be >= 1");
  SbmSpec spec{{n}, {{p}}, rho};
  return sample_sbm_pair(spec, rng);
}

ShuffledGraph shuffle_pair(const SquareMatrix& b, Rng& rng) {
  Permutation p = rng.permutation(b.order());
  return {permute_matrix(b, p), std::move(p)};
}

std::vector<std::size_t> equal_blocks(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("equal_blocks: bad k");
  std::vector<std::size_t> sizes(k, n / k);
  for (std::size_t r = 0; r < n % k; ++r) ++sizes[r];
  return sizes;
}

}  // namespace otmatch
