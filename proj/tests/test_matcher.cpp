#include <cmath>
#include <stdexcept>
#include <random>
#include <utility>

#include "doctest.h"
#include "oracles.hpp"

#include "otmatch/matcher.hpp"
#include "otmatch/objective.hpp"
#include "otmatch/samplers.hpp"

using namespace otmatch;

namespace {

using oracle::Mat;

Mat random_ds(std::size_t n, std::mt19937_64& g) {
  return oracle::sinkhorn(oracle::random_mat(n, g, 0.05, 1));
}

MatchOptions options(StepSolver s) {
  MatchOptions o;
  o.step_solver = s;
  return o;
}

// Number of automorphisms of a symmetric 0/1 graph, stopping at `cap`.
std::size_t count_automorphisms(const Mat& g, std::size_t cap) {
  const std::size_t n = g.size();
  std::vector<std::size_t> img(n);
  std::vector<bool> used(n, false);
  std::size_t found = 0;
  std::function<void(std::size_t)> extend = [&](std::size_t v) {
    if (found >= cap) return;
    if (v == n) {
      ++found;
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w]) continue;
      bool ok = g[v][v] == g[w][w];
      for (std::size_t u = 0; ok && u < v; ++u) ok = g[u][v] == g[img[u]][w];
      if (!ok) continue;
      used[w] = true;
      img[v] = w;
      extend(v + 1);
      used[w] = false;
    }
  };
  extend(0);
  return found;
}

bool connected(const Mat& g) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < g.size(); ++w)
      if (g[v][w] != 0 && !seen[w]) seen[w] = stack.emplace_back(w), true;
  }
  return std::find(seen.begin(), seen.end(), false) == seen.end();
}

}  // namespace

TEST_SUITE("matcher") {

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 g(41);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = oracle::random_mat(5, g, -1, 1);
    const auto b = oracle::random_mat(5, g, -1, 1);
    const auto p = oracle::random_mat(5, g, 0, 1);
    const auto grad =
        gradient(oracle::from_mat(a), oracle::from_mat(b), oracle::from_mat(p));
    const double h = 1e-5;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        auto up = p, dn = p;
        up[i][j] += h;
        dn[i][j] -= h;
        const double fd =
            (oracle::trace_form(a, b, up) - oracle::trace_form(a, b, dn)) / (2 * h);
        CHECK(std::abs(grad(i, j) - fd) < 1e-4);
      }
  }
}

TEST_CASE("gradient special cases") {
  std::mt19937_64 g(42);
  const auto a = oracle::from_mat(oracle::random_graph(6, 0.5, g));
  const auto b = oracle::from_mat(oracle::random_graph(6, 0.5, g));
  const auto p = oracle::from_mat(random_ds(6, g));
  const auto two_apb = oracle::mul(oracle::mul(oracle::to_mat(a), oracle::to_mat(p)),
                                   oracle::to_mat(b));
  const auto grad = gradient(a, b, p);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(grad(i, j) == doctest::Approx(2 * two_apb[i][j]));
  CHECK(gradient(SquareMatrix(6), b, p) == SquareMatrix(6));
  CHECK_THROWS_AS(gradient(a, SquareMatrix(5), p), std::invalid_argument);
}

TEST_CASE("seeded gradient matches finite differences of the full objective") {
  std::mt19937_64 g(43);
  const std::size_t n = 7;
  const auto a = oracle::random_mat(n, g, -1, 1);
  const auto b = oracle::random_mat(n, g, -1, 1);
  SeedSet seeds{{{5, 1}, {0, 6}, {3, 3}}};
  const std::vector<std::size_t> a_free{1, 2, 4, 6}, b_free{0, 2, 4, 5};
  const auto p22 = oracle::random_mat(4, g, 0, 1);
  // Embed P22 and the seed pairs into a full n x n matrix indexed [A][B].
  auto full = [&](const Mat& q) {
    Mat p(n, std::vector<double>(n, 0.0));
    for (const auto& [va, vb] : seeds.pairs) p[va][vb] = 1;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p[a_free[i]][b_free[j]] = q[i][j];
    return p;
  };
  const auto grad = seeded_gradient(oracle::from_mat(a), oracle::from_mat(b),
                                    seeds, oracle::from_mat(p22));
  const double h = 1e-5;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      auto up = p22, dn = p22;
      up[i][j] += h;
      dn[i][j] -= h;
      const double fd = (oracle::trace_form(a, b, full(up)) -
                         oracle::trace_form(a, b, full(dn))) /
                        (2 * h);
      CHECK(std::abs(grad(i, j) - fd) < 1e-4);
    }
}

TEST_CASE("line search degenerate cases") {
  std::mt19937_64 g(44);
  const auto a = oracle::from_mat(oracle::random_mat(4, g));
  const auto b = oracle::from_mat(oracle::random_mat(4, g));
  const auto p = oracle::from_mat(random_ds(4, g));
  CHECK(exact_line_search(a, b, p, p, Sense::kMaximize) == 1.0);
  CHECK(exact_line_search(a, b, p, p, Sense::kMinimize) == 1.0);
  CHECK(line_search_step(0.0, 1.0, Sense::kMaximize) == 1.0);
  CHECK(line_search_step(0.0, 1.0, Sense::kMinimize) == 0.0);
  CHECK(line_search_step(-1.0, 1.0, Sense::kMaximize) == 0.5);
  CHECK(line_search_step(1.0, -1.0, Sense::kMinimize) == 0.5);
}

TEST_CASE("line search is never worse than a 1001-point grid") {
  std::mt19937_64 g(45);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = oracle::random_mat(4, g, -1, 1);
    const auto b = oracle::random_mat(4, g, -1, 1);
    const auto p = random_ds(4, g);
    const auto q = trial % 2 ? random_ds(4, g) : oracle::perm_matrix(oracle::random_perm(4, g));
    auto f = [&](double alpha) {
      Mat x(4, std::vector<double>(4));
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          x[i][j] = alpha * p[i][j] + (1 - alpha) * q[i][j];
      return oracle::trace_form(a, b, x);
    };
    for (auto sense : {Sense::kMaximize, Sense::kMinimize}) {
      const double alpha =
          exact_line_search(oracle::from_mat(a), oracle::from_mat(b),
                            oracle::from_mat(p), oracle::from_mat(q), sense);
      CHECK(alpha >= 0.0);
      CHECK(alpha <= 1.0);
      const double got = f(alpha);
      for (int s = 0; s <= 1000; ++s) {
        const double v = f(s / 1000.0);
        if (sense == Sense::kMaximize) {
          CHECK(got >= v - 1e-9);
        } else {
          CHECK(got <= v + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("n = 1") {
  const auto a = SquareMatrix(1, 3.0), b = SquareMatrix(1, -2.0);
  for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
    const auto r = frank_wolfe_match(a, b, options(s));
    CHECK(r.alignment == Permutation::identity(1));
    CHECK(r.objective == -6.0);
  }
}

TEST_CASE("recovers a shuffled asymmetric 10-vertex graph") {
  std::mt19937_64 g(46);
  Mat graph;
  do graph = oracle::random_graph(10, 0.4, g);
  while (!connected(graph) || count_automorphisms(graph, 2) != 1);
  const auto a = oracle::from_mat(graph);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = oracle::random_perm(10, g);
    // B relabels A by p, so the planted alignment of B onto A is p^-1.
    const auto b = permute_matrix(a, Permutation(p));
    const Permutation truth = Permutation(p).inverse();
    const auto r = frank_wolfe_match(a, b, options(StepSolver::kLot));
    CHECK(match_ratio(r.alignment, truth) == 1.0);
    CHECK(edge_disagreements(a, b, r.alignment) == 0.0);
  }
}

TEST_CASE("brute-force sandwich and step-0 projection bound") {
  std::mt19937_64 g(47);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + trial % 5;  // up to 7
    const auto a = oracle::random_mat(n, g, -1, 1);
    const auto b = oracle::random_mat(n, g, -1, 1);
    const auto ext = oracle::brute_qap(a, b);
    const auto ma = oracle::from_mat(a), mb = oracle::from_mat(b);
    const auto step0 =
        solve_lap(gradient(ma, mb, DoublyStochastic::barycenter(n).matrix()),
                  Sense::kMaximize)
            .assignment;
    for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
      const auto r = frank_wolfe_match(ma, mb, options(s));
      CHECK(r.objective <= ext.max + 1e-9);
      CHECK(r.objective >= ext.min - 1e-9);
      CHECK(r.objective ==
            doctest::Approx(oracle::elementwise_dot(a, oracle::relabel(b, r.alignment.map()))));
      if (n == 4) CHECK(r.objective >= qap_objective(ma, mb, step0) - 1e-9);
    }
  }
}

TEST_CASE("relaxed objective is monotone along the iterates") {
  std::mt19937_64 g(48);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8 + trial;
    const auto a = oracle::from_mat(oracle::random_graph(n, 0.3, g));
    const auto b = oracle::from_mat(oracle::random_graph(n, 0.3, g));
    for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
      auto opts = options(s);
      opts.fw_tol = 1e-6;
      const auto r = frank_wolfe_match(a, b, opts);
      double prev = qap_objective(a, b, DoublyStochastic::barycenter(n));
      for (const auto& rec : r.iterate_history) {
        CHECK(rec.objective >= prev - 1e-9);
        CHECK(rec.alpha >= 0.0);
        CHECK(rec.alpha <= 1.0);
        prev = rec.objective;
      }
    }
  }
}

TEST_CASE("minimizing (A, B) equals maximizing (-A, B)") {
  std::mt19937_64 g(49);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::from_mat(oracle::random_mat(12, g, 0, 1));
    const auto b = oracle::from_mat(oracle::random_mat(12, g, 0, 1));
    auto neg = a;
    neg *= -1.0;
    for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
      auto lo = options(s), hi = options(s);
      lo.sense = Sense::kMinimize;
      hi.sense = Sense::kMaximize;
      CHECK(frank_wolfe_match(a, b, lo).alignment ==
            frank_wolfe_match(neg, b, hi).alignment);
    }
  }
}

TEST_CASE("seeded matching") {
  std::mt19937_64 g(50);
  const auto a = oracle::from_mat(oracle::random_graph(15, 0.3, g));
  const auto b = oracle::from_mat(oracle::random_graph(15, 0.3, g));

  SUBCASE("m = 0 is frank_wolfe_match") {
    for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
      auto opts = options(s);
      opts.shuffle_input = true;
      opts.rng_seed = 9;
      const auto x = frank_wolfe_match(a, b, opts);
      const auto y = seeded_match(a, b, SeedSet{}, opts);
      CHECK(x.alignment == y.alignment);
      CHECK(x.objective == y.objective);
      CHECK(x.iterations == y.iterations);
    }
  }
  SUBCASE("m = n - 1 forces the completion") {
    SeedSet seeds;
    const auto p = oracle::random_perm(15, g);
    for (std::size_t k = 0; k < 14; ++k) seeds.pairs.emplace_back(p[k], k);
    const auto r = seeded_match(a, b, seeds, options(StepSolver::kLot));
    CHECK(r.alignment == Permutation(p));
    CHECK(r.seed_count == 14);
  }
  SUBCASE("seed pairs are kept") {
    SeedSet seeds{{{3, 7}, {10, 2}, {0, 0}}};
    auto opts = options(StepSolver::kExactLap);
    opts.shuffle_input = true;
    const auto r = seeded_match(a, b, seeds, opts);
    for (const auto& [va, vb] : seeds.pairs) CHECK(r.alignment[vb] == va);
  }
  SUBCASE("invalid seeds") {
    CHECK_THROWS_AS(seeded_match(a, b, SeedSet{{{1, 2}, {1, 3}}}, MatchOptions{}),
                    std::invalid_argument);
    SeedSet all;
    for (std::size_t k = 0; k < 15; ++k) all.pairs.emplace_back(k, k);
    CHECK_THROWS_AS(seeded_match(a, b, all, MatchOptions{}), std::invalid_argument);
  }
}

namespace {

// Mean full and non-seed match ratios (m = 0 and m = 10) of GOAT on shuffled
// SBM pairs, n = 60, three blocks, 0.7 diagonal.
std::pair<double, double> seeded_means(double rho, int reps) {
  SbmSpec spec{equal_blocks(60, 3), {{0.7, 0.3, 0.4}, {0.3, 0.7, 0.3}, {0.4, 0.3, 0.7}}, rho};
  double mean0 = 0, mean10 = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(stream_seed(2024, rep));
    const auto pair = sample_sbm_pair(spec, rng);
    const auto sh = shuffle_pair(pair.b, rng);
    const Permutation truth = sh.truth.inverse();
    auto opts = options(StepSolver::kLot);
    opts.shuffle_input = true;
    opts.rng_seed = rep;
    mean0 += match_ratio(frank_wolfe_match(pair.a, sh.b, opts).alignment, truth) / reps;
    const auto order = rng.permutation(60);
    SeedSet seeds;
    for (std::size_t s = 0; s < 10; ++s) seeds.pairs.emplace_back(truth[order[s]], order[s]);
    mean10 += non_seed_match_ratio(seeded_match(pair.a, sh.b, seeds, opts).alignment,
                                   truth, seeds) / reps;
  }
  return {mean0, mean10};
}

}  // namespace

TEST_CASE("seeds help on correlated SBM pairs") {
  // rho = 0.9, 20 replicates. Unseeded GOAT can already be exact here, in
  // which case no strict gain is possible.
  const auto [mean0, mean10] = seeded_means(0.9, 20);
  MESSAGE("rho=0.9: m=0 mean " << mean0 << ", m=10 mean " << mean10);
  CHECK(mean10 > mean0);
}

TEST_CASE("seeds help on weakly correlated SBM pairs") {
  const auto [mean0, mean10] = seeded_means(0.6, 20);
  MESSAGE("rho=0.6: m=0 mean " << mean0 << ", m=10 mean " << mean10);
  CHECK(mean10 > mean0);
}

TEST_CASE("restarts and determinism") {
  std::mt19937_64 g(51);
  const auto a = oracle::from_mat(oracle::random_graph(20, 0.3, g));
  const auto b = oracle::from_mat(oracle::random_graph(20, 0.3, g));
  auto opts = options(StepSolver::kLot);
  opts.init = InitMode::kRandomizedBlend;
  opts.shuffle_input = true;
  opts.rng_seed = 77;
  const auto one = frank_wolfe_match(a, b, opts);
  opts.n_restarts = 4;
  const auto best = frank_wolfe_match(a, b, opts);
  const auto again = frank_wolfe_match(a, b, opts);
  CHECK(best.objective >= one.objective);
  CHECK(best.restart >= 0);
  CHECK(best.restart < 4);
  CHECK(best.alignment == again.alignment);
  CHECK(best.objective == again.objective);
  CHECK(best.iterations == again.iterations);
  REQUIRE(best.iterate_history.size() == again.iterate_history.size());
  for (std::size_t i = 0; i < best.iterate_history.size(); ++i) {
    CHECK(best.iterate_history[i].objective == again.iterate_history[i].objective);
    CHECK(best.iterate_history[i].alpha == again.iterate_history[i].alpha);
  }
}

TEST_CASE("supplied initialization") {
  std::mt19937_64 g(52);
  const auto a = oracle::from_mat(oracle::random_graph(12, 0.4, g));
  const auto p = oracle::random_perm(12, g);
  const auto b = permute_matrix(a, Permutation(p));
  // Starting at the planted permutation is already optimal.
  auto opts = options(StepSolver::kExactLap);
  opts.init = InitMode::kSupplied;
  opts.supplied_init = DoublyStochastic(Permutation(p).inverse());
  opts.shuffle_input = true;
  const auto r = frank_wolfe_match(a, b, opts);
  CHECK(edge_disagreements(a, b, r.alignment) == 0.0);

  opts.supplied_init = DoublyStochastic::barycenter(5);
  CHECK_THROWS_AS(frank_wolfe_match(a, b, opts), std::invalid_argument);
  opts.supplied_init.reset();
  CHECK_THROWS_AS(frank_wolfe_match(a, b, opts), std::invalid_argument);
}

TEST_CASE("invalid options") {
  const SquareMatrix a(3);
  MatchOptions o;
  o.max_iters = 0;
  CHECK_THROWS_AS(frank_wolfe_match(a, a, o), std::invalid_argument);
  o = {};
  o.fw_tol = 0;
  CHECK_THROWS_AS(frank_wolfe_match(a, a, o), std::invalid_argument);
  o = {};
  o.n_restarts = 0;
  CHECK_THROWS_AS(frank_wolfe_match(a, a, o), std::invalid_argument);
  CHECK_THROWS_AS(frank_wolfe_match(a, SquareMatrix(4), MatchOptions{}),
                  std::invalid_argument);
}

TEST_CASE("random doubly stochastic initializations") {
  Rng r1(42), r2(42);
  CHECK(random_doubly_stochastic(1, r1).matrix() == SquareMatrix(1, 1.0));
  CHECK(randomized_blend_init(1, r1).matrix() == SquareMatrix(1, 1.0));
  Rng a(42), b(42);
  CHECK(random_doubly_stochastic(3, a).matrix() ==
        random_doubly_stochastic(3, b).matrix());
  for (std::size_t n : {2u, 5u, 40u}) {
    const auto k = random_doubly_stochastic(n, r2);
    CHECK(marginal_deviation(k.matrix()) <= 1e-8);
    const auto blend = randomized_blend_init(n, r2);
    CHECK(marginal_deviation(blend.matrix()) <= 1e-8);
    CHECK(blend.matrix().min_value() >= 0.0);
  }
  // Blending J with J gives J.
  const auto j = DoublyStochastic::barycenter(4).matrix();
  CHECK(max_abs_diff(0.5 * j + 0.5 * j, j) < 1e-16);
}

}  // TEST_SUITE
