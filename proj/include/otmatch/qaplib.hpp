#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"

namespace otmatch {

struct QapInstance {
  std::string name;
  SquareMatrix a;
  SquareMatrix b;
  std::optional<double> known_optimum;
  // In library orientation: qap_objective(a, b, *known_permutation) is the
  // optimum.
  std::optional<Permutation> known_permutation;

  std::size_t order() const { return a.order(); }
};

struct QapSolution {
  std::size_t n = 0;
  double optimum = 0.0;
  // Converted to library orientation (see parse_qaplib_sln).
  Permutation permutation;
};

// QAPLIB .dat: n, then n*n entries of A and n*n entries of B, any
// whitespace. Throws std::invalid_argument with expected/found counts on a
// token-count mismatch.
QapInstance parse_qaplib_dat(std::string_view text, std::string name = {});

// QAPLIB .sln: "n optimum" then a 1-based permutation pi, where facility i
// sits at location pi(i) and the cost is sum_ij A[i][j] B[pi(i)][pi(j)]. The
// returned permutation is pi^-1 in 0-based form, which is what
// qap_objective(A, B, .) expects for that cost.
QapSolution parse_qaplib_sln(std::string_view text);

std::string format_qaplib_dat(const QapInstance& inst);

// log10(f_goat / f_faq); negative when GOAT found the lower objective.
double relative_accuracy(double f_goat, double f_faq);

// Reads `dat` and, if present, the sibling .sln with the same stem. Throws
// if the .sln optimum is not reproduced by its permutation within 1e-6
// relative.
QapInstance load_qaplib_instance(const std::filesystem::path& dat);

}  // namespace otmatch
