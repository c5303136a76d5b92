#pragma once

#include <cstddef>
#include <vector>

#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"

namespace otmatch {

enum class Sense { kMinimize, kMaximize };

struct LapSolution {
  // Dense view is the optimal 0/1 matrix Q; row assignment[k] is matched to
  // column k.
  Permutation assignment;
  // trace(Q^T M) = sum_k M[assignment[k]][k].
  double objective = 0.0;
};

// trace(Q^T M) for the permutation matrix of p.
double assignment_value(const SquareMatrix& m, const Permutation& p);

// Exact dense linear assignment by shortest augmenting paths (Dijkstra with
// dual potentials), O(n^3) worst case. Rows are inserted in increasing index
// order, which fixes the tie-breaking. Throws std::invalid_argument on
// non-finite input.
LapSolution solve_lap(const SquareMatrix& m, Sense sense);

inline constexpr std::size_t kMaxTieSetOrder = 10;

// Every permutation whose value is within `tol` of the optimum, by exhaustive
// enumeration in lexicographic order. Throws std::invalid_argument when
// m.order() > kMaxTieSetOrder.
std::vector<Permutation> lap_tie_set(const SquareMatrix& m, Sense sense,
                                     double tol = 1e-9);

}  // namespace otmatch
