#pragma once

#include <cstddef>
#include <vector>

#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"
#include "otmatch/rng.hpp"

namespace otmatch {

// rho-correlated stochastic block model.
struct SbmSpec {
  std::vector<std::size_t> block_sizes;
  // k x k edge probabilities, symmetric, entries in [0, 1].
  std::vector<std::vector<double>> block_probs;
  double rho = 0.0;

  std::size_t vertex_count() const;
  // Throws std::invalid_argument on an invalid specification.
  void validate() const;
};

struct GraphPair {
  SquareMatrix a;
  SquareMatrix b;
};

// Two simple undirected graphs with identity planted correspondence. Each
// slot (i, j) is Bernoulli(p) in both graphs with corr(A_ij, B_ij) = rho:
// A_ij ~ Bern(p), then B_ij ~ Bern(p + rho (1 - p)) if A_ij = 1 and
// Bern(p (1 - rho)) otherwise.
GraphPair sample_sbm_pair(const SbmSpec& spec, Rng& rng);

// Single-block special case.
GraphPair sample_er_pair(std::size_t n, double p, double rho, Rng& rng);

struct ShuffledGraph {
  SquareMatrix b;
  // b == permute_matrix(original, truth).
  Permutation truth;
};

ShuffledGraph shuffle_pair(const SquareMatrix& b, Rng& rng);

// Block sizes splitting n as evenly as possible into k blocks (larger blocks
// first).
std::vector<std::size_t> equal_blocks(std::size_t n, std::size_t k);

}  // namespace otmatch
