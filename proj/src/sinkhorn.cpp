#include "otmatch/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "otmatch/kernels.hpp"

namespace otmatch {

namespace {

bool all_positive_finite(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double t) {
    return std::isfinite(t) && t > 0.0;
  });
}

SquareMatrix scale(const SquareMatrix& k, const std::vector<double>& u,
                   const std::vector<double>& v) {
  const auto n = static_cast<std::ptrdiff_t>(k.order());
  SquareMatrix p(k.order());
  const double* kp = k.data();
  double* pp = p.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      pp[i * n + j] = u[i] * kp[i * n + j] * v[j];
    }
  }
  return p;
}

// out[i] = -log sum_j exp(g[i][j] + pot[j]).
void neg_logsumexp_rows(const SquareMatrix& g, const std::vector<double>& pot,
                        std::vector<double>& out) {
  const auto n = static_cast<std::ptrdiff_t>(g.order());
  const double* gp = g.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* gi = gp + i * n;
    double hi = -std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t j = 0; j < n; ++j) hi = std::max(hi, gi[j] + pot[j]);
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) s += std::exp(gi[j] + pot[j] - hi);
    out[i] = -(hi + std::log(s));
  }
}

SinkhornResult finish(SquareMatrix plan, bool converged, int sweeps,
                      bool log_domain) {
  SinkhornResult r;
  r.deviation = marginal_deviation(plan);
  r.plan = std::move(plan);
  r.converged = converged;
  r.sweeps = sweeps;
  r.log_domain = log_domain;
  return r;
}

// Kernel-space iteration. Returns false if a scaling vector stopped being
// positive and finite, leaving `result` untouched.
bool scaling_iteration(const SquareMatrix& k, const SinkhornParams& params,
                       SinkhornResult& result) {
  const std::size_t n = k.order();
  std::vector<double> u(n, 1.0), v(n, 1.0), kv(n), ktu(n);
  kernels::matvec(k, v, kv);
  int sweeps = 0;
  bool converged = false;
  while (sweeps < params.max_sweeps) {
    for (std::size_t i = 0; i < n; ++i) u[i] = 1.0 / kv[i];
    kernels::matvec_transposed(k, u, ktu);
    for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 / ktu[j];
    ++sweeps;
    if (!all_positive_finite(u) || !all_positive_finite(v)) return false;
    kernels::matvec(k, v, kv);
    // Columns are exact after the v update; only rows can drift.
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dev = std::max(dev, std::abs(u[i] * kv[i] - 1.0));
    }
    if (dev <= params.tol) {
      converged = true;
      break;
    }
  }
  SquareMatrix plan = scale(k, u, v);
  if (!plan.all_finite()) return false;
  result = finish(std::move(plan), converged, sweeps, false);
  // Rounding in the materialized plan can differ from the vector estimate.
  result.converged = converged && result.deviation <= params.tol;
  return true;
}

}  // namespace

void SinkhornParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("SinkhornParams: lambda must be positive");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("SinkhornParams: tol must be positive");
  }
  if (max_sweeps < 1) {
    throw std::invalid_argument("SinkhornParams: max_sweeps must be >= 1");
  }
}

DoublyStochastic SinkhornResult::doubly_stochastic(double tol) const {
  return DoublyStochastic(plan, tol);
}

SinkhornResult sinkhorn_log(const SquareMatrix& log_kernel,
                            const SinkhornParams& params) {
  params.validate();
  const std::size_t n = log_kernel.order();
  if (n == 0) throw std::invalid_argument("sinkhorn_log: empty matrix");
  const SquareMatrix gt = log_kernel.transposed();
  std::vector<double> f(n, 0.0), g(n, 0.0), lse(n);
  neg_logsumexp_rows(log_kernel, g, lse);
  int sweeps = 0;
  bool converged = false;
  while (sweeps < params.max_sweeps) {
    f = lse;
    neg_logsumexp_rows(gt, f, g);
    ++sweeps;
    neg_logsumexp_rows(log_kernel, g, lse);
    // Row i sums to exp(f_i - lse_i).
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dev = std::max(dev, std::abs(std::exp(f[i] - lse[i]) - 1.0));
    }
    if (dev <= params.tol) {
      converged = true;
      break;
    }
  }
  SquareMatrix plan(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      plan(i, j) = std::exp(log_kernel(i, j) + f[i] + g[j]);
    }
  }
  SinkhornResult r = finish(std::move(plan), converged, sweeps, true);
  r.converged = converged && r.deviation <= params.tol;
  return r;
}

SinkhornResult sinkhorn_knopp(const SquareMatrix& k,
                              const SinkhornParams& params) {
  params.validate();
  if (k.empty()) throw std::invalid_argument("sinkhorn_knopp: empty matrix");
  if (!(k.min_value() > 0.0)) {
    throw std::invalid_argument("sinkhorn_knopp: kernel entries must be positive");
  }
  SinkhornResult r;
  if (scaling_iteration(k, params, r)) return r;
  SquareMatrix log_k(k.order());
  for (std::size_t t = 0; t < k.values().size(); ++t) {
    log_k.values()[t] = std::log(k.values()[t]);
  }
  return sinkhorn_log(log_k, params);
}

SquareMatrix lot_cost(const SquareMatrix& m, Sense sense) {
  if (!m.all_finite()) throw std::invalid_argument("lot: non-finite cost");
  const double lo = m.min_value();
  const double hi = m.max_value();
  const double range = hi - lo;
  SquareMatrix c(m.order());
  if (!(range > 0.0)) return c;
  const auto src = m.values();
  auto dst = c.values();
  for (std::size_t t = 0; t < src.size(); ++t) {
    dst[t] = (sense == Sense::kMinimize ? src[t] - lo : hi - src[t]) / range;
  }
  return c;
}

SinkhornResult lot(const SquareMatrix& m, Sense sense,
                   const SinkhornParams& params) {
  params.validate();
  const std::size_t n = m.order();
  if (n == 0) throw std::invalid_argument("lot: empty matrix");
  const SquareMatrix cost = lot_cost(m, sense);

  // Exponent lies in [-lambda, 0]; rows whose entries all underflow send the
  // scaling vectors out of range and trigger the log-domain path.
  SquareMatrix kernel(n);
  {
    const auto c = cost.values();
    auto k = kernel.values();
    const auto total = static_cast<std::ptrdiff_t>(c.size());
    const double lambda = params.lambda;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < total; ++t) k[t] = std::exp(-lambda * c[t]);
  }
  SinkhornResult r;
  if (scaling_iteration(kernel, params, r)) return r;
  SquareMatrix log_k = std::move(cost);
  log_k *= -params.lambda;
  return sinkhorn_log(log_k, params);
}

}  // namespace otmatch
