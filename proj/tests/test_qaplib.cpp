#include <cmath>
#include <stdexcept>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"

#include "otmatch/matcher.hpp"
#include "otmatch/objective.hpp"
#include "otmatch/qaplib.hpp"
#include "otmatch/text_io.hpp"

using namespace otmatch;
namespace fs = std::filesystem;

namespace {

const fs::path kQaplib = fs::path(OTMATCH_DATA_DIR) / "qaplib";

// QAPLIB's own convention: sum_ij A[i][j] * B[pi(i)][pi(j)], pi 1-based as
// listed in the .sln file.
double qaplib_cost(const SquareMatrix& a, const SquareMatrix& b,
                   const std::vector<std::size_t>& pi_one_based) {
  double s = 0;
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < a.order(); ++j)
      s += a(i, j) * b(pi_one_based[i] - 1, pi_one_based[j] - 1);
  return s;
}

}  // namespace

TEST_SUITE("qaplib") {

TEST_CASE("parse a small .dat") {
  const auto inst = parse_qaplib_dat("2\n0 1\n1 0\n\n0 2\n2 0");
  CHECK(inst.order() == 2);
  CHECK(inst.a == SquareMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(inst.b == SquareMatrix::from_rows({{0, 2}, {2, 0}}));
}

TEST_CASE("token count mismatch reports expected and found") {
  std::string text = "3\n";
  for (int i = 0; i < 17; ++i) text += "1 ";
  try {
    parse_qaplib_dat(text);
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("18") != std::string::npos);
    CHECK(msg.find("17") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_qaplib_dat("2 0 1 1 0 0 2 two 0"), std::invalid_argument);
}

TEST_CASE("parse a small .sln") {
  const auto sol = parse_qaplib_sln("2 4\n2 1");
  CHECK(sol.n == 2);
  CHECK(sol.optimum == 4.0);
  CHECK(sol.permutation == Permutation({1, 0}));
  CHECK_THROWS_AS(parse_qaplib_sln("3 10\n1 1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_qaplib_sln("3 10\n1 2 4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_qaplib_sln("3\n"), std::invalid_argument);
}

TEST_CASE("bundled instances reproduce their stated optimum exactly") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kQaplib)) {
    if (entry.path().extension() != ".dat") continue;
    CAPTURE(entry.path().string());
    const auto inst = load_qaplib_instance(entry.path());
    REQUIRE(inst.known_optimum);
    REQUIRE(inst.known_permutation);
    CHECK(inst.a.order() == inst.order());
    CHECK(inst.b.order() == inst.order());
    CHECK(qap_objective(inst.a, inst.b, *inst.known_permutation) ==
          *inst.known_optimum);

    // Cross-check against the file's 1-based permutation read independently.
    auto sln = entry.path();
    sln.replace_extension(".sln");
    const auto nums = parse_numbers(read_file(sln));
    std::vector<std::size_t> pi;
    for (std::size_t t = 2; t < nums.size(); ++t)
      pi.push_back(static_cast<std::size_t>(nums[t]));
    CHECK(qaplib_cost(inst.a, inst.b, pi) == *inst.known_optimum);
    ++count;
  }
  CHECK(count >= 3);
}

TEST_CASE("chr12c structure") {
  const auto inst = load_qaplib_instance(kQaplib / "chr12c.dat");
  CHECK(inst.order() == 12);
  CHECK(*inst.known_optimum == 11156.0);
}

TEST_CASE("round trip through .dat text") {
  const auto inst = load_qaplib_instance(kQaplib / "chr12c.dat");
  const auto again = parse_qaplib_dat(format_qaplib_dat(inst));
  CHECK(again.a == inst.a);
  CHECK(again.b == inst.b);
}

TEST_CASE("solvers never beat the known optimum") {
  for (const char* name : {"chr12c", "synth_grid9", "synth_rand8"}) {
    const auto inst = load_qaplib_instance(kQaplib / (std::string(name) + ".dat"));
    for (auto s : {StepSolver::kExactLap, StepSolver::kLot}) {
      MatchOptions o;
      o.step_solver = s;
      o.sense = Sense::kMinimize;
      o.shuffle_input = true;
      o.init = InitMode::kRandomizedBlend;
      o.n_restarts = 5;
      const auto r = frank_wolfe_match(inst.a, inst.b, o);
      CHECK(r.objective >= *inst.known_optimum - 1e-9);
    }
  }
}

TEST_CASE("relative_accuracy") {
  CHECK(relative_accuracy(5, 5) == 0.0);
  CHECK(relative_accuracy(10, 1) == doctest::Approx(1.0));
  CHECK(relative_accuracy(1, 2) == doctest::Approx(-0.30103).epsilon(1e-5));
  CHECK_THROWS_AS(relative_accuracy(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(relative_accuracy(1, -1), std::invalid_argument);
}

}  // TEST_SUITE
