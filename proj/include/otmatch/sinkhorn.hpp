#pragma once

#include "otmatch/doubly_stochastic.hpp"
#include "otmatch/lap.hpp"
#include "otmatch/matrix.hpp"

namespace otmatch {

struct SinkhornParams {
  // Inverse temperature of the Gibbs kernel exp(-lambda * C). LOT applies it
  // to the cost rescaled onto [0, 1].
  double lambda = 100.0;
  // One sweep = row normalization followed by column normalization.
  int max_sweeps = 1000;
  // Stop once every row and column sum is within tol of 1.
  double tol = 1e-8;

  // Throws std::invalid_argument on lambda <= 0, tol <= 0 or max_sweeps < 1.
  void validate() const;
};

struct SinkhornResult {
  SquareMatrix plan;
  bool converged = false;
  int sweeps = 0;
  // Largest marginal deviation of `plan`.
  double deviation = 0.0;
  // True when the iteration ran on log-potentials because the scaling
  // vectors left the representable range.
  bool log_domain = false;

  // Throws std::invalid_argument unless `plan` satisfies the doubly
  // stochastic invariants at `tol`.
  DoublyStochastic doubly_stochastic(double tol = kDoublyStochasticTol) const;
};

// Scales a strictly positive K to diag(u) K diag(v) with unit marginals.
// Throws std::invalid_argument on a nonpositive entry. Non-convergence is
// reported through `converged`, not thrown.
SinkhornResult sinkhorn_knopp(const SquareMatrix& k,
                              const SinkhornParams& params = {});

// Same iteration run on log-potentials over a log-kernel (entries may be
// arbitrarily negative).
SinkhornResult sinkhorn_log(const SquareMatrix& log_kernel,
                            const SinkhornParams& params = {});

// Lightspeed optimal transport: an entropically smoothed solution of the
// relaxed assignment problem min/max trace(Q^T M) over doubly stochastic Q.
// M is shifted so its best entry is 0 and scaled onto [0, 1] before
// exponentiation; a constant M yields the barycenter.
SinkhornResult lot(const SquareMatrix& m, Sense sense,
                   const SinkhornParams& params = {});

// Normalized cost C in [0, 1] used by lot(); zero everywhere for constant M.
SquareMatrix lot_cost(const SquareMatrix& m, Sense sense);

}  // namespace otmatch
