#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "otmatch/doubly_stochastic.hpp"
#include "otmatch/lap.hpp"
#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"
#include "otmatch/rng.hpp"
#include "otmatch/sinkhorn.hpp"

namespace otmatch {

// How the Frank-Wolfe step direction is found from the gradient.
enum class StepSolver {
  kExactLap,  // permutation-valued direction (FAQ)
  kLot,       // doubly stochastic Sinkhorn direction (GOAT)
};

enum class InitMode { kBarycenter, kSupplied, kRandomizedBlend };

// What the final assignment is computed from.
enum class Projection {
  kGradient,  // optimize trace(Q^T grad f(P_final)) over permutations
  kIterate,   // nearest permutation to P_final (maximize trace(Q^T P_final))
};

struct MatchOptions {
  StepSolver step_solver = StepSolver::kLot;
  SinkhornParams sinkhorn;
  InitMode init = InitMode::kBarycenter;
  // Required when init == kSupplied. Indexed [vertex of A][vertex of B]; for
  // seeded matching, over the non-seed vertices of each graph in increasing
  // vertex order.
  std::optional<DoublyStochastic> supplied_init;
  int max_iters = 30;
  // Stop once ||P_next - P||_F < fw_tol.
  double fw_tol = 1e-2;
  int n_restarts = 1;
  // Relabel B uniformly at random before each restart (and compose the
  // relabeling out of the result) so LAP tie-breaking cannot favor the input
  // order.
  bool shuffle_input = false;
  std::uint64_t rng_seed = 0;
  // kMaximize: graph matching form, maximize trace(A^T P B P^T).
  // kMinimize: QAP form.
  Sense sense = Sense::kMaximize;
  Projection projection = Projection::kGradient;

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct IterateRecord {
  int iteration = 0;
  double objective = 0.0;  // relaxed objective at P^(iteration)
  double alpha = 0.0;      // weight kept on the previous iterate
};

struct MatchResult {
  // Relabels B onto A: vertex k of B is matched to vertex alignment[k] of A.
  Permutation alignment;
  // qap_objective(A, B, alignment).
  double objective = 0.0;
  int iterations = 0;
  std::vector<IterateRecord> iterate_history;
  bool converged = false;
  std::chrono::duration<double> wall_time{0.0};
  // Restart that produced this result.
  int restart = 0;
  std::size_t seed_count = 0;
  // LOT step directions that hit max_sweeps before reaching tol.
  int unconverged_steps = 0;
};

// Known correspondences (vertex of A, vertex of B).
struct SeedSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
  // Throws std::invalid_argument on an out-of-range or repeated vertex, or
  // when size() >= n.
  void validate(std::size_t n) const;
};

// A P B^T + A^T P B.
SquareMatrix gradient(const SquareMatrix& a, const SquareMatrix& b,
                      const SquareMatrix& p);

// Gradient of the seeded objective with respect to the non-seed block P22:
// A21 B21^T + A12^T B12 + A22 P22 B22^T + A22^T P22 B22, non-seed vertices
// of each graph in increasing vertex order.
SquareMatrix seeded_gradient(const SquareMatrix& a, const SquareMatrix& b,
                             const SeedSet& seeds, const SquareMatrix& p22);

// Optimizer over [0, 1] of g(alpha) = c2 alpha^2 + c1 alpha in `sense`.
// Ties prefer alpha = 1, then alpha = 0.
double line_search_step(double c2, double c1, Sense sense);

// Exact optimizer of f(alpha P + (1 - alpha) Q) over alpha in [0, 1], with
// f(X) = trace(A^T X B X^T).
double exact_line_search(const SquareMatrix& a, const SquareMatrix& b,
                         const SquareMatrix& p, const SquareMatrix& q,
                         Sense sense);

// Independent Uniform(0, 1] entries projected by Sinkhorn-Knopp.
DoublyStochastic random_doubly_stochastic(std::size_t n, Rng& rng);

// (J + K) / 2 with J the barycenter and K = random_doubly_stochastic(n, rng).
DoublyStochastic randomized_blend_init(std::size_t n, Rng& rng);

MatchResult frank_wolfe_match(const SquareMatrix& a, const SquareMatrix& b,
                              const MatchOptions& opts);

// Frank-Wolfe over the non-seed block only; every seed pair is fixed in the
// returned alignment. With no seeds this is frank_wolfe_match.
MatchResult seeded_match(const SquareMatrix& a, const SquareMatrix& b,
                         const SeedSet& seeds, const MatchOptions& opts);

// match_ratio restricted to B-vertices that are not seeds.
double non_seed_match_ratio(const Permutation& found, const Permutation& truth,
                            const SeedSet& seeds);

}  // namespace otmatch
