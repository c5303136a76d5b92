#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "otmatch/kernels.hpp"

using namespace otmatch;
namespace k = otmatch::kernels;

namespace {

SquareMatrix rand_sq(std::size_t n, std::mt19937_64& g, double zero_frac = 0) {
  auto m = oracle::random_mat(n, g, -1, 1);
  std::bernoulli_distribution z(zero_frac);
  for (auto& row : m)
    for (auto& x : row)
      if (z(g)) x = 0;
  return oracle::from_mat(m);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("gemm agrees with the serial reference in every transpose mode") {
  std::mt19937_64 g(11);
  for (std::size_t n : {1u, 2u, 7u, 64u, 129u}) {
    const auto a = rand_sq(n, g, 0.3), b = rand_sq(n, g);
    for (auto ta : {k::Trans::kNo, k::Trans::kYes})
      for (auto tb : {k::Trans::kNo, k::Trans::kYes}) {
        SquareMatrix c1 = rand_sq(n, g), c2 = c1;
        k::gemm(a, ta, b, tb, 1.5, 0.5, c1);
        k::serial::gemm(a, ta, b, tb, 1.5, 0.5, c2);
        CHECK(max_abs_diff(c1, c2) < 1e-12 * static_cast<double>(n));
      }
  }
}

TEST_CASE("gemm matches explicit products") {
  std::mt19937_64 g(12);
  const auto a = oracle::random_mat(9, g), b = oracle::random_mat(9, g);
  const auto want = oracle::mul(oracle::transpose(a), b);
  SquareMatrix c;
  k::gemm(oracle::from_mat(a), k::Trans::kYes, oracle::from_mat(b), k::Trans::kNo,
          1.0, 0.0, c);
  CHECK(max_abs_diff(c, oracle::from_mat(want)) < 1e-13);
}

TEST_CASE("matvec agrees with the serial reference") {
  std::mt19937_64 g(13);
  for (std::size_t n : {1u, 5u, 300u, 600u}) {
    const auto m = rand_sq(n, g);
    std::vector<double> x(n), y1(n), y2(n);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& v : x) v = u(g);
    k::matvec(m, x, y1);
    k::serial::matvec(m, x, y2);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]));
    k::matvec_transposed(m, x, y1);
    k::serial::matvec_transposed(m, x, y2);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]));
  }
}

TEST_CASE("quadratic gradient: symmetric shortcut equals the general form") {
  std::mt19937_64 g(14);
  const auto a = oracle::from_mat(oracle::random_graph(40, 0.2, g));
  const auto b = oracle::from_mat(oracle::random_graph(40, 0.2, g));
  const auto p = rand_sq(40, g);
  const auto fast = k::quadratic_gradient(a, b, p, true);
  const auto general = k::quadratic_gradient(a, b, p, false);
  const auto ref = k::serial::quadratic_gradient(a, b, p);
  CHECK(max_abs_diff(fast, general) < 1e-11);
  CHECK(max_abs_diff(fast, ref) < 1e-11);
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 g(15);
  const auto a = rand_sq(150, g, 0.5), b = rand_sq(150, g), p = rand_sq(150, g);
  const int saved = k::max_threads();
  k::set_threads(1);
  const auto g1 = k::quadratic_gradient(a, b, p, false);
  std::vector<double> x(150, 0.25), y1(150), y2(150);
  k::matvec_transposed(a, x, y1);
  k::set_threads(4);
  const auto g4 = k::quadratic_gradient(a, b, p, false);
  k::matvec_transposed(a, x, y2);
  k::set_threads(saved);
  CHECK(g1 == g4);
  CHECK(y1 == y2);
}

}  // TEST_SUITE
