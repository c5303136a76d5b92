#pragma once

// Dense linear-algebra kernels behind the gradient and Sinkhorn inner loops.
//
// The top-level functions are OpenMP-parallel over output rows (or column
// blocks); each output entry is accumulated in a fixed order, so results do
// not depend on the thread count. `kernels::serial` holds straightforward
// reference loops kept for testing and benchmarking the parallel versions.

#include <span>

#include "otmatch/matrix.hpp"

namespace otmatch::kernels {

enum class Trans { kNo, kYes };

// c = alpha * op(a) * op(b) + beta * c. With beta == 0, c is overwritten
// (resized if needed) and its previous contents are ignored.
void gemm(const SquareMatrix& a, Trans ta, const SquareMatrix& b, Trans tb,
          double alpha, double beta, SquareMatrix& c);

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);

// y = K x
void matvec(const SquareMatrix& k, std::span<const double> x,
            std::span<double> y);
// y = K^T x
void matvec_transposed(const SquareMatrix& k, std::span<const double> x,
                       std::span<double> y);

// A P B^T + A^T P B. When both A and B are symmetric this is 2 A P B and
// only two products are formed.
SquareMatrix quadratic_gradient(const SquareMatrix& a, const SquareMatrix& b,
                                const SquareMatrix& p, bool symmetric);

// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();
// Caps the kernel thread count for the calling thread; no-op without OpenMP.
void set_threads(int n);

namespace serial {

void gemm(const SquareMatrix& a, Trans ta, const SquareMatrix& b, Trans tb,
          double alpha, double beta, SquareMatrix& c);
void matvec(const SquareMatrix& k, std::span<const double> x,
            std::span<double> y);
void matvec_transposed(const SquareMatrix& k, std::span<const double> x,
                       std::span<double> y);
SquareMatrix quadratic_gradient(const SquareMatrix& a, const SquareMatrix& b,
                                const SquareMatrix& p);

}  // namespace serial

}  // namespace otmatch::kernels
