#include "otmatch/matcher.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "otmatch/kernels.hpp"
#include "otmatch/objective.hpp"

namespace otmatch {

namespace {

using Clock = std::chrono::steady_clock;

bool better(double candidate, double incumbent, Sense sense) {
  return sense == Sense::kMaximize ? candidate > incumbent
                                   : candidate < incumbent;
}

// f(P) = <P, L> + trace(A^T P B P^T) + constant over the non-seed block.
struct Problem {
  SquareMatrix a;
  SquareMatrix b;
  SquareMatrix linear;  // order 0 when there are no seeds
  double constant = 0.0;
  bool symmetric = false;

  std::size_t order() const { return a.order(); }

  SquareMatrix quad_gradient(const SquareMatrix& p) const {
    return kernels::quadratic_gradient(a, b, p, symmetric);
  }

  SquareMatrix full_gradient(const SquareMatrix& p) const {
    SquareMatrix g = quad_gradient(p);
    if (!linear.empty()) g += linear;
    return g;
  }

  // Uses grad = full_gradient(p): the quadratic part is <P, grad - L> / 2.
  double value(const SquareMatrix& p, const SquareMatrix& grad) const {
    double v = 0.5 * inner(p, grad) + constant;
    if (!linear.empty()) v += 0.5 * inner(p, linear);
    return v;
  }
};

struct RunOutcome {
  Permutation assignment;  // on the non-seed block
  std::vector<IterateRecord> history;
  int iterations = 0;
  bool converged = false;
  int unconverged_steps = 0;
};

SquareMatrix step_direction(const SquareMatrix& grad, const MatchOptions& opts,
                            int& unconverged_steps) {
  if (opts.step_solver == StepSolver::kExactLap) {
    return solve_lap(grad, opts.sense).assignment.to_dense();
  }
  SinkhornResult r = lot(grad, opts.sense, opts.sinkhorn);
  if (!r.converged) ++unconverged_steps;
  return std::move(r.plan);
}

RunOutcome run_frank_wolfe(const Problem& prob, SquareMatrix p,
                           const MatchOptions& opts) {
  RunOutcome out;
  SquareMatrix grad = prob.full_gradient(p);
  for (int it = 1; it <= opts.max_iters; ++it) {
    SquareMatrix q = step_direction(grad, opts, out.unconverged_steps);
    SquareMatrix d = p - q;
    const SquareMatrix grad_d = prob.quad_gradient(d);
    // g(alpha) = f(Q + alpha D): curvature f_quad(D), slope <D, grad f(Q)>
    // with grad f(Q) = grad f(P) - grad_quad(D).
    const double c2 = 0.5 * inner(d, grad_d);
    const double c1 = inner(d, grad) - 2.0 * c2;
    const double alpha = line_search_step(c2, c1, opts.sense);

    const double step_norm =
        (1.0 - alpha) * std::sqrt(d.frobenius_norm_squared());
    d *= alpha;
    q += d;
    p = std::move(q);
    // Gradient is affine in P.
    const auto gd = grad_d.values();
    auto gv = grad.values();
    for (std::size_t t = 0; t < gv.size(); ++t) gv[t] -= (1.0 - alpha) * gd[t];

    out.history.push_back({it, prob.value(p, grad), alpha});
    out.iterations = it;
    if (step_norm < opts.fw_tol) {
      out.converged = true;
      break;
    }
  }
  if (opts.projection == Projection::kGradient) {
    out.assignment = solve_lap(grad, opts.sense).assignment;
  } else {
    out.assignment = solve_lap(p, Sense::kMaximize).assignment;
  }
  return out;
}

// Seeds first (in the given order), then the remaining vertices ascending.
std::vector<std::size_t> seeds_first_order(std::size_t n,
                                           const std::vector<std::size_t>& seeds) {
  std::vector<bool> is_seed(n, false);
  for (std::size_t s : seeds) is_seed[s] = true;
  std::vector<std::size_t> order(seeds);
  for (std::size_t v = 0; v < n; ++v) {
    if (!is_seed[v]) order.push_back(v);
  }
  return order;
}

Problem build_problem(const SquareMatrix& a, const SquareMatrix& b,
                      const std::vector<std::size_t>& a_order,
                      const std::vector<std::size_t>& b_order, std::size_t m) {
  const std::size_t n = a.order();
  const std::size_t k = n - m;
  Problem prob;
  prob.a = SquareMatrix(k);
  prob.b = SquareMatrix(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      prob.a(i, j) = a(a_order[m + i], a_order[m + j]);
      prob.b(i, j) = b(b_order[m + i], b_order[m + j]);
    }
  }
  prob.symmetric = prob.a.is_symmetric() && prob.b.is_symmetric();
  if (m == 0) return prob;

  // trace(A11^T B11).
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t t = 0; t < m; ++t) {
      prob.constant += a(a_order[s], a_order[t]) * b(b_order[s], b_order[t]);
    }
  }
  // L = A21 B21^T + A12^T B12.
  prob.linear = SquareMatrix(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        s += a(a_order[m + i], a_order[t]) * b(b_order[m + j], b_order[t]);
        s += a(a_order[t], a_order[m + i]) * b(b_order[t], b_order[m + j]);
      }
      prob.linear(i, j) = s;
    }
  }
  return prob;
}

}  // namespace

void MatchOptions::validate() const {
  if (max_iters < 1) {
    throw std::invalid_argument("MatchOptions: max_iters must be >= 1");
  }
  if (!(fw_tol > 0.0)) {
    throw std::invalid_argument("MatchOptions: fw_tol must be positive");
  }
  if (n_restarts < 1) {
    throw std::invalid_argument("MatchOptions: n_restarts must be >= 1");
  }
  if (init == InitMode::kSupplied && !supplied_init) {
    throw std::invalid_argument(
        "MatchOptions: supplied initialization missing");
  }
  sinkhorn.validate();
}

void SeedSet::validate(std::size_t n) const {
  if (pairs.size() >= n && !(n == 0 && pairs.empty())) {
    std::ostringstream msg;
    msg << "SeedSet: " << pairs.size() << " seeds for " << n
        << " vertices (need fewer seeds than vertices)";
    throw std::invalid_argument(msg.str());
  }
  std::vector<bool> seen_a(n, false), seen_b(n, false);
  for (const auto& [va, vb] : pairs) {
    if (va >= n || vb >= n) {
      throw std::invalid_argument("SeedSet: vertex out of range");
    }
    if (seen_a[va] || seen_b[vb]) {
      throw std::invalid_argument("SeedSet: repeated seed vertex");
    }
    seen_a[va] = seen_b[vb] = true;
  }
}

SquareMatrix gradient(const SquareMatrix& a, const SquareMatrix& b,
                      const SquareMatrix& p) {
  require_same_order("gradient", {a.order(), b.order(), p.order()});
  return kernels::quadratic_gradient(a, b, p, false);
}

SquareMatrix seeded_gradient(const SquareMatrix& a, const SquareMatrix& b,
                             const SeedSet& seeds, const SquareMatrix& p22) {
  require_same_order("seeded_gradient", {a.order(), b.order()});
  const std::size_t n = a.order();
  seeds.validate(n);
  require_same_order("seeded_gradient", {n - seeds.size(), p22.order()});
  std::vector<std::size_t> a_seeds, b_seeds;
  for (const auto& [va, vb] : seeds.pairs) {
    a_seeds.push_back(va);
    b_seeds.push_back(vb);
  }
  const Problem prob = build_problem(a, b, seeds_first_order(n, a_seeds),
                                     seeds_first_order(n, b_seeds),
                                     seeds.size());
  return prob.full_gradient(p22);
}

double line_search_step(double c2, double c1, Sense sense) {
  double best_alpha = 1.0;
  double best = c2 + c1;
  if (better(0.0, best, sense)) {
    best_alpha = 0.0;
    best = 0.0;
  }
  const bool curved = sense == Sense::kMaximize ? c2 < 0.0 : c2 > 0.0;
  if (curved) {
    const double alpha = -c1 / (2.0 * c2);
    if (alpha > 0.0 && alpha < 1.0) {
      const double g = alpha * (c2 * alpha + c1);
      if (better(g, best, sense)) best_alpha = alpha;
    }
  }
  return best_alpha;
}

double exact_line_search(const SquareMatrix& a, const SquareMatrix& b,
                         const SquareMatrix& p, const SquareMatrix& q,
                         Sense sense) {
  require_same_order("exact_line_search",
                     {a.order(), b.order(), p.order(), q.order()});
  const SquareMatrix d = p - q;
  const double c2 = qap_objective_dense(a, b, d);
  const double c1 = inner(d, gradient(a, b, q));
  return line_search_step(c2, c1, sense);
}

DoublyStochastic random_doubly_stochastic(std::size_t n, Rng& rng) {
  if (n == 0) {
    throw std::invalid_argument("random_doubly_stochastic: n must be >= 1");
  }
  SquareMatrix k(n);
  for (double& x : k.values()) x = 1.0 - rng.uniform();
  return sinkhorn_knopp(k).doubly_stochastic();
}

DoublyStochastic randomized_blend_init(std::size_t n, Rng& rng) {
  const DoublyStochastic k = random_doubly_stochastic(n, rng);
  SquareMatrix blend(n, 0.5 / static_cast<double>(n));
  const auto kv = k.matrix().values();
  auto bv = blend.values();
  for (std::size_t t = 0; t < bv.size(); ++t) bv[t] += 0.5 * kv[t];
  return DoublyStochastic(std::move(blend));
}

MatchResult frank_wolfe_match(const SquareMatrix& a, const SquareMatrix& b,
                              const MatchOptions& opts) {
  return seeded_match(a, b, SeedSet{}, opts);
}

MatchResult seeded_match(const SquareMatrix& a, const SquareMatrix& b,
                         const SeedSet& seeds, const MatchOptions& opts) {
  const auto start = Clock::now();
  require_same_order("frank_wolfe_match", {a.order(), b.order()});
  opts.validate();
  const std::size_t n = a.order();
  if (n == 0) throw std::invalid_argument("frank_wolfe_match: empty graphs");
  seeds.validate(n);
  const std::size_t m = seeds.size();
  const std::size_t k = n - m;
  if (opts.init == InitMode::kSupplied && opts.supplied_init->order() != k) {
    throw std::invalid_argument(
        "frank_wolfe_match: supplied initialization has wrong order");
  }

  std::vector<std::size_t> a_seeds, b_seeds;
  for (const auto& [va, vb] : seeds.pairs) {
    a_seeds.push_back(va);
    b_seeds.push_back(vb);
  }
  const std::vector<std::size_t> a_order = seeds_first_order(n, a_seeds);
  // Non-seed vertices of B in increasing original order, for mapping a
  // supplied initialization.
  std::vector<std::size_t> b_rank(n, 0);
  {
    const std::vector<std::size_t> b_base = seeds_first_order(n, b_seeds);
    for (std::size_t j = m; j < n; ++j) b_rank[b_base[j]] = j - m;
  }

  MatchResult best;
  bool have_best = false;
  for (int r = 0; r < opts.n_restarts; ++r) {
    Rng rng(stream_seed(opts.rng_seed, static_cast<std::uint64_t>(r)));
    const Permutation shuffle =
        opts.shuffle_input ? rng.permutation(n) : Permutation::identity(n);
    const SquareMatrix b_shuffled =
        opts.shuffle_input ? permute_matrix(b, shuffle) : b;

    std::vector<std::size_t> bs_seeds;
    for (std::size_t vb : b_seeds) bs_seeds.push_back(shuffle[vb]);
    const std::vector<std::size_t> b_order = seeds_first_order(n, bs_seeds);
    const Problem prob = build_problem(a, b_shuffled, a_order, b_order, m);

    SquareMatrix init;
    switch (opts.init) {
      case InitMode::kBarycenter:
        init = SquareMatrix(k, 1.0 / static_cast<double>(k));
        break;
      case InitMode::kRandomizedBlend:
        init = randomized_blend_init(k, rng).matrix();
        break;
      case InitMode::kSupplied: {
        const Permutation unshuffle = shuffle.inverse();
        const SquareMatrix& src = opts.supplied_init->matrix();
        init = SquareMatrix(k);
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t col = b_rank[unshuffle[b_order[m + j]]];
          for (std::size_t i = 0; i < k; ++i) init(i, j) = src(i, col);
        }
        break;
      }
    }

    RunOutcome run = run_frank_wolfe(prob, std::move(init), opts);

    std::vector<std::size_t> map(n);
    for (std::size_t s = 0; s < m; ++s) map[b_order[s]] = a_order[s];
    for (std::size_t j = 0; j < k; ++j) {
      map[b_order[m + j]] = a_order[m + run.assignment[j]];
    }
    const Permutation alignment = Permutation(std::move(map)).compose(shuffle);
    const double objective = qap_objective(a, b, alignment);

    if (!have_best || better(objective, best.objective, opts.sense)) {
      best.alignment = alignment;
      best.objective = objective;
      best.iterations = run.iterations;
      best.iterate_history = std::move(run.history);
      best.converged = run.converged;
      best.restart = r;
      best.unconverged_steps = run.unconverged_steps;
      have_best = true;
    }
  }
  best.seed_count = m;
  best.wall_time = Clock::now() - start;
  return best;
}

double non_seed_match_ratio(const Permutation& found, const Permutation& truth,
                            const SeedSet& seeds) {
  if (found.size() != truth.size()) {
    throw std::invalid_argument("non_seed_match_ratio: length mismatch");
  }
  std::vector<bool> is_seed(found.size(), false);
  for (const auto& pr : seeds.pairs) is_seed.at(pr.second) = true;
  std::size_t total = 0, hits = 0;
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (is_seed[k]) continue;
    ++total;
    hits += found[k] == truth[k];
  }
  return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace otmatch
