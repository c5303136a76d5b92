#pragma once

#include "otmatch/doubly_stochastic.hpp"
#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"

namespace otmatch {

// trace(A^T P B P^T). The permutation and dense overloads agree on
// p.to_dense().
double qap_objective(const SquareMatrix& a, const SquareMatrix& b,
                     const Permutation& p);
double qap_objective(const SquareMatrix& a, const SquareMatrix& b,
                     const DoublyStochastic& p);
// Same quantity for an arbitrary dense P (no feasibility check).
double qap_objective_dense(const SquareMatrix& a, const SquareMatrix& b,
                           const SquareMatrix& p);

// ||A - P B P^T||_F^2, zero iff p is an isomorphism from B onto A.
double edge_disagreements(const SquareMatrix& a, const SquareMatrix& b,
                          const Permutation& p);

// Fraction of indices k with found[k] == truth[k].
double match_ratio(const Permutation& found, const Permutation& truth);

// Output (i, j) = B[p^-1(i)][p^-1(j)], i.e. the dense product P B P^T.
SquareMatrix permute_matrix(const SquareMatrix& b, const Permutation& p);

// Rank transform of the nonzero weights: each nonzero becomes
// rank / (nnz + 1) with ties given their average rank; zeros stay zero.
// Throws std::invalid_argument on a negative weight.
SquareMatrix pass_to_ranks(const SquareMatrix& w);

}  // namespace otmatch
