#include "otmatch/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace otmatch::kernels {

namespace {

// Columns per thread block in matvec_transposed.
constexpr std::ptrdiff_t kColumnBlock = 256;

void check_orders(const SquareMatrix& a, const SquareMatrix& b,
                  const SquareMatrix& c, double beta) {
  if (beta != 0.0) {
    require_same_order("gemm", {a.order(), b.order(), c.order()});
  } else {
    require_same_order("gemm", {a.order(), b.order()});
  }
}

void scale_or_reset(SquareMatrix& c, std::size_t n, double beta) {
  if (beta == 0.0) {
    if (c.order() != n) {
      c = SquareMatrix(n);
    } else {
      std::fill(c.values().begin(), c.values().end(), 0.0);
    }
  } else if (beta != 1.0) {
    c *= beta;
  }
}

}  // namespace

void gemm(const SquareMatrix& a, Trans ta, const SquareMatrix& b, Trans tb,
          double alpha, double beta, SquareMatrix& c) {
  check_orders(a, b, c, beta);
  const auto n = static_cast<std::ptrdiff_t>(a.order());
  scale_or_reset(c, a.order(), beta);
  if (n == 0) return;

  // Row-major left operand; transposing costs O(n^2) against the O(n^3)
  // product.
  SquareMatrix a_t;
  const SquareMatrix* left = &a;
  if (ta == Trans::kYes) {
    a_t = a.transposed();
    left = &a_t;
  }
  const double* lp = left->data();
  const double* bp = b.data();
  double* cp = c.data();

  if (tb == Trans::kYes) {
    // c[i][j] += alpha * <left row i, b row j>
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* li = lp + i * n;
      double* ci = cp + i * n;
      for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double* bj = bp + j * n;
        double s = 0.0;
        for (std::ptrdiff_t k = 0; k < n; ++k) s += li[k] * bj[k];
        ci[j] += alpha * s;
      }
    }
  } else {
    // c[i][:] += alpha * left[i][k] * b[k][:]; adjacency operands are mostly
    // zero, so zero multipliers are skipped.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* li = lp + i * n;
      double* ci = cp + i * n;
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        const double aik = li[k];
        if (aik == 0.0) continue;
        const double scaled = alpha * aik;
        const double* bk = bp + k * n;
#pragma omp simd
        for (std::ptrdiff_t j = 0; j < n; ++j) ci[j] += scaled * bk[j];
      }
    }
  }
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
  SquareMatrix c;
  gemm(a, Trans::kNo, b, Trans::kNo, 1.0, 0.0, c);
  return c;
}

void matvec(const SquareMatrix& k, std::span<const double> x,
            std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(k.order());
  if (x.size() != k.order() || y.size() != k.order()) {
    throw std::invalid_argument("matvec: length mismatch");
  }
  const double* kp = k.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* ki = kp + i * n;
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) s += ki[j] * x[j];
    y[i] = s;
  }
}

void matvec_transposed(const SquareMatrix& k, std::span<const double> x,
                       std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(k.order());
  if (x.size() != k.order() || y.size() != k.order()) {
    throw std::invalid_argument("matvec_transposed: length mismatch");
  }
  const double* kp = k.data();
  const std::ptrdiff_t blocks = (n + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::ptrdiff_t j0 = blk * kColumnBlock;
    const std::ptrdiff_t j1 = std::min(n, j0 + kColumnBlock);
    for (std::ptrdiff_t j = j0; j < j1; ++j) y[j] = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double xi = x[i];
      const double* ki = kp + i * n;
#pragma omp simd
      for (std::ptrdiff_t j = j0; j < j1; ++j) y[j] += xi * ki[j];
    }
  }
}

SquareMatrix quadratic_gradient(const SquareMatrix& a, const SquareMatrix& b,
                                const SquareMatrix& p, bool symmetric) {
  require_same_order("quadratic_gradient", {a.order(), b.order(), p.order()});
  SquareMatrix ap;
  SquareMatrix g;
  if (symmetric) {
    gemm(a, Trans::kNo, p, Trans::kNo, 1.0, 0.0, ap);
    gemm(ap, Trans::kNo, b, Trans::kNo, 2.0, 0.0, g);
    return g;
  }
  gemm(a, Trans::kNo, p, Trans::kNo, 1.0, 0.0, ap);
  gemm(ap, Trans::kNo, b, Trans::kYes, 1.0, 0.0, g);
  SquareMatrix atp;
  gemm(a, Trans::kYes, p, Trans::kNo, 1.0, 0.0, atp);
  gemm(atp, Trans::kNo, b, Trans::kNo, 1.0, 1.0, g);
  return g;
}

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace serial {

void gemm(const SquareMatrix& a, Trans ta, const SquareMatrix& b, Trans tb,
          double alpha, double beta, SquareMatrix& c) {
  check_orders(a, b, c, beta);
  const std::size_t n = a.order();
  scale_or_reset(c, n, beta);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double x = ta == Trans::kYes ? a(k, i) : a(i, k);
        const double y = tb == Trans::kYes ? b(j, k) : b(k, j);
        s += x * y;
      }
      c(i, j) += alpha * s;
    }
  }
}

void matvec(const SquareMatrix& k, std::span<const double> x,
            std::span<double> y) {
  const std::size_t n = k.order();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k(i, j) * x[j];
    y[i] = s;
  }
}

void matvec_transposed(const SquareMatrix& k, std::span<const double> x,
                       std::span<double> y) {
  const std::size_t n = k.order();
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += k(i, j) * x[i];
    y[j] = s;
  }
}

SquareMatrix quadratic_gradient(const SquareMatrix& a, const SquareMatrix& b,
                                const SquareMatrix& p) {
  SquareMatrix ap;
  SquareMatrix g;
  serial::gemm(a, Trans::kNo, p, Trans::kNo, 1.0, 0.0, ap);
  serial::gemm(ap, Trans::kNo, b, Trans::kYes, 1.0, 0.0, g);
  SquareMatrix atp;
  serial::gemm(a, Trans::kYes, p, Trans::kNo, 1.0, 0.0, atp);
  serial::gemm(atp, Trans::kNo, b, Trans::kNo, 1.0, 1.0, g);
  return g;
}

}  // namespace serial

}  // namespace otmatch::kernels
