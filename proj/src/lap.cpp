#include "otmatch/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace otmatch {

namespace {

constexpr std::ptrdiff_t kNone = -1;

// Shortest augmenting path from free row `row` over the reduced costs
// cost - u - v. Returns the free column reached and its path length in
// `min_val`.
std::ptrdiff_t augmenting_path(const SquareMatrix& cost,
                               const std::vector<double>& u,
                               const std::vector<double>& v,
                               std::vector<std::ptrdiff_t>& path,
                               const std::vector<std::ptrdiff_t>& row4col,
                               std::vector<double>& dist, std::ptrdiff_t row,
                               std::vector<bool>& scanned_rows,
                               std::vector<bool>& scanned_cols,
                               std::vector<std::ptrdiff_t>& remaining,
                               double& min_val) {
  const auto n = static_cast<std::ptrdiff_t>(cost.order());
  const double inf = std::numeric_limits<double>::infinity();
  std::ptrdiff_t num_remaining = n;
  for (std::ptrdiff_t it = 0; it < n; ++it) remaining[it] = it;
  std::fill(scanned_rows.begin(), scanned_rows.end(), false);
  std::fill(scanned_cols.begin(), scanned_cols.end(), false);
  std::fill(dist.begin(), dist.end(), inf);

  min_val = 0.0;
  std::ptrdiff_t sink = kNone;
  std::ptrdiff_t i = row;
  while (sink == kNone) {
    std::ptrdiff_t index = kNone;
    double lowest = inf;
    scanned_rows[i] = true;
    const auto ci = cost.row(static_cast<std::size_t>(i));
    for (std::ptrdiff_t it = 0; it < num_remaining; ++it) {
      const std::ptrdiff_t j = remaining[it];
      const double r = min_val + ci[j] - u[i] - v[j];
      if (r < dist[j]) {
        path[j] = i;
        dist[j] = r;
      }
      // Among equal candidates prefer an unassigned column: it ends the
      // search immediately.
      if (dist[j] < lowest || (dist[j] == lowest && row4col[j] == kNone)) {
        lowest = dist[j];
        index = it;
      }
    }
    min_val = lowest;
    const std::ptrdiff_t j = remaining[index];
    if (row4col[j] == kNone) {
      sink = j;
    } else {
      i = row4col[j];
    }
    scanned_cols[j] = true;
    remaining[index] = remaining[--num_remaining];
  }
  return sink;
}

}  // namespace

double assignment_value(const SquareMatrix& m, const Permutation& p) {
  require_same_order("assignment_value", {m.order(), p.size()});
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += m(p[k], k);
  return s;
}

LapSolution solve_lap(const SquareMatrix& m, Sense sense) {
  if (!m.all_finite()) {
    throw std::invalid_argument("solve_lap: non-finite cost entry");
  }
  const std::size_t n = m.order();
  if (n == 0) return {Permutation{}, 0.0};

  // Nonnegative working costs: c - min(c) for minimization, max(c) - c for
  // maximization.
  SquareMatrix cost(n);
  {
    const double lo = m.min_value();
    const double hi = m.max_value();
    const auto src = m.values();
    auto dst = cost.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
      dst[k] = sense == Sense::kMinimize ? src[k] - lo : hi - src[k];
    }
  }

  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::vector<double> u(n, 0.0), v(n, 0.0), dist(n);
  std::vector<std::ptrdiff_t> path(n, kNone), col4row(n, kNone),
      row4col(n, kNone), remaining(n);
  std::vector<bool> scanned_rows(n), scanned_cols(n);

  for (std::ptrdiff_t cur = 0; cur < sn; ++cur) {
    double min_val = 0.0;
    const std::ptrdiff_t sink =
        augmenting_path(cost, u, v, path, row4col, dist, cur, scanned_rows,
                        scanned_cols, remaining, min_val);

    u[cur] += min_val;
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
      if (scanned_rows[i] && i != cur) u[i] += min_val - dist[col4row[i]];
    }
    for (std::ptrdiff_t j = 0; j < sn; ++j) {
      if (scanned_cols[j]) v[j] -= min_val - dist[j];
    }

    std::ptrdiff_t j = sink;
    while (true) {
      const std::ptrdiff_t i = path[j];
      row4col[j] = i;
      std::swap(col4row[i], j);
      if (i == cur) break;
    }
  }

  std::vector<std::size_t> map(n);
  for (std::size_t j = 0; j < n; ++j) map[j] = static_cast<std::size_t>(row4col[j]);
  LapSolution sol{Permutation(std::move(map)), 0.0};
  sol.objective = assignment_value(m, sol.assignment);
  return sol;
}

std::vector<Permutation> lap_tie_set(const SquareMatrix& m, Sense sense,
                                     double tol) {
  const std::size_t n = m.order();
  if (n > kMaxTieSetOrder) {
    std::ostringstream msg;
    msg << "lap_tie_set: order " << n << " exceeds enumeration limit "
        << kMaxTieSetOrder;
    throw std::invalid_argument(msg.str());
  }
  if (n == 0) return {};
  std::vector<std::size_t> map(n);
  auto value = [&] {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += m(map[k], k);
    return s;
  };

  std::iota(map.begin(), map.end(), std::size_t{0});
  double best = value();
  while (std::next_permutation(map.begin(), map.end())) {
    const double v = value();
    best = sense == Sense::kMaximize ? std::max(best, v) : std::min(best, v);
  }

  std::vector<Permutation> ties;
  std::iota(map.begin(), map.end(), std::size_t{0});
  do {
    if (std::abs(value() - best) <= tol) ties.emplace_back(map);
  } while (std::next_permutation(map.begin(), map.end()));
  return ties;
}

}  // namespace otmatch
