#include "otmatch/objective.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "otmatch/kernels.hpp"

namespace otmatch {

double qap_objective(const SquareMatrix& a, const SquareMatrix& b,
                     const Permutation& p) {
  require_same_order("qap_objective", {a.order(), b.order(), p.size()});
  const std::size_t n = a.order();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto ar = a.row(p[k]);
    const auto br = b.row(k);
    for (std::size_t l = 0; l < n; ++l) s += ar[p[l]] * br[l];
  }
  return s;
}

double qap_objective_dense(const SquareMatrix& a, const SquareMatrix& b,
                           const SquareMatrix& p) {
  require_same_order("qap_objective", {a.order(), b.order(), p.order()});
  using kernels::Trans;
  SquareMatrix pb;
  kernels::gemm(p, Trans::kNo, b, Trans::kNo, 1.0, 0.0, pb);
  SquareMatrix pbpt;
  kernels::gemm(pb, Trans::kNo, p, Trans::kYes, 1.0, 0.0, pbpt);
  return inner(a, pbpt);
}

double qap_objective(const SquareMatrix& a, const SquareMatrix& b,
                     const DoublyStochastic& p) {
  return qap_objective_dense(a, b, p.matrix());
}

double edge_disagreements(const SquareMatrix& a, const SquareMatrix& b,
                          const Permutation& p) {
  require_same_order("edge_disagreements", {a.order(), b.order(), p.size()});
  const std::size_t n = a.order();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto ar = a.row(p[k]);
    const auto br = b.row(k);
    for (std::size_t l = 0; l < n; ++l) {
      const double d = ar[p[l]] - br[l];
      s += d * d;
    }
  }
  return s;
}

double match_ratio(const Permutation& found, const Permutation& truth) {
  if (found.size() != truth.size()) {
    throw std::invalid_argument("match_ratio: length mismatch");
  }
  if (found.size() == 0) return 1.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < found.size(); ++k) hits += found[k] == truth[k];
  return static_cast<double>(hits) / static_cast<double>(found.size());
}

SquareMatrix permute_matrix(const SquareMatrix& b, const Permutation& p) {
  require_same_order("permute_matrix", {b.order(), p.size()});
  const std::size_t n = b.order();
  SquareMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto br = b.row(k);
    auto orow = out.row(p[k]);
    for (std::size_t l = 0; l < n; ++l) orow[p[l]] = br[l];
  }
  return out;
}

SquareMatrix pass_to_ranks(const SquareMatrix& w) {
  const auto vals = w.values();
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] < 0.0) {
      throw std::invalid_argument("pass_to_ranks: negative weight");
    }
    if (vals[k] != 0.0) nz.push_back(k);
  }
  SquareMatrix out(w.order());
  if (nz.empty()) return out;
  std::stable_sort(nz.begin(), nz.end(), [&](std::size_t x, std::size_t y) {
    return vals[x] < vals[y];
  });
  const double denom = static_cast<double>(nz.size()) + 1.0;
  auto ov = out.values();
  std::size_t lo = 0;
  while (lo < nz.size()) {
    std::size_t hi = lo;
    while (hi + 1 < nz.size() && vals[nz[hi + 1]] == vals[nz[lo]]) ++hi;
    // 1-based ranks lo+1 .. hi+1 share their mean.
    const double rank = 0.5 * static_cast<double>(lo + hi + 2);
    for (std::size_t t = lo; t <= hi; ++t) ov[nz[t]] = rank / denom;
    lo = hi + 1;
  }
  return out;
}

}  // namespace otmatch
