#include "otmatch/qaplib.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "otmatch/objective.hpp"
#include "otmatch/text_io.hpp"

namespace otmatch {

namespace {

std::size_t leading_order(const std::vector<double>& tokens, const char* what) {
  if (tokens.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty input");
  }
  const double n = tokens[0];
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
    std::ostringstream msg;
    msg << what << ": malformed order " << n;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

QapInstance parse_qaplib_dat(std::string_view text, std::string name) {
  const std::vector<double> tokens = parse_numbers(text);
  const std::size_t n = leading_order(tokens, "qaplib .dat");
  const std::size_t expected = 2 * n * n;
  if (tokens.size() - 1 != expected) {
    std::ostringstream msg;
    msg << "qaplib .dat: order " << n << " needs " << expected
        << " matrix entries, found " << tokens.size() - 1;
    throw std::invalid_argument(msg.str());
  }
  const auto a_begin = tokens.begin() + 1;
  const auto b_begin = a_begin + static_cast<std::ptrdiff_t>(n * n);
  QapInstance inst;
  inst.name = std::move(name);
  inst.a = SquareMatrix(n, std::vector<double>(a_begin, b_begin));
  inst.b = SquareMatrix(n, std::vector<double>(b_begin, tokens.end()));
  return inst;
}

QapSolution parse_qaplib_sln(std::string_view text) {
  const std::vector<double> tokens = parse_numbers(text);
  if (tokens.size() < 2) {
    throw std::invalid_argument("qaplib .sln: header needs n and optimum");
  }
  const std::size_t n = leading_order(tokens, "qaplib .sln");
  if (tokens.size() - 2 != n) {
    std::ostringstream msg;
    msg << "qaplib .sln: expected " << n << " permutation entries, found "
        << tokens.size() - 2;
    throw std::invalid_argument(msg.str());
  }
  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = tokens[i + 2];
    if (!(v >= 1.0) || v > static_cast<double>(n) || v != std::floor(v)) {
      std::ostringstream msg;
      msg << "qaplib .sln: entry " << i + 1 << " = " << v
          << " is not an index in 1.." << n;
      throw std::invalid_argument(msg.str());
    }
    pi[i] = static_cast<std::size_t>(v) - 1;
  }
  QapSolution sol;
  sol.n = n;
  sol.optimum = tokens[1];
  sol.permutation = Permutation(std::move(pi)).inverse();
  return sol;
}

std::string format_qaplib_dat(const QapInstance& inst) {
  std::string out = std::to_string(inst.order()) + "\n\n";
  for (const SquareMatrix* m : {&inst.a, &inst.b}) {
    for (std::size_t i = 0; i < m->order(); ++i) {
      for (std::size_t j = 0; j < m->order(); ++j) {
        if (j) out += ' ';
        out += format_number((*m)(i, j));
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

double relative_accuracy(double f_goat, double f_faq) {
  if (!(f_goat > 0.0) || !(f_faq > 0.0)) {
    throw std::invalid_argument("relative_accuracy: objectives must be positive");
  }
  return std::log10(f_goat / f_faq);
}

QapInstance load_qaplib_instance(const std::filesystem::path& dat) {
  QapInstance inst = parse_qaplib_dat(read_file(dat), dat.stem().string());
  std::filesystem::path sln = dat;
  sln.replace_extension(".sln");
  if (!std::filesystem::exists(sln)) return inst;

  const QapSolution sol = parse_qaplib_sln(read_file(sln));
  if (sol.n != inst.order()) {
    throw std::invalid_argument(sln.string() + ": order differs from .dat");
  }
  const double value = qap_objective(inst.a, inst.b, sol.permutation);
  const double scale = std::max(1.0, std::abs(sol.optimum));
  if (std::abs(value - sol.optimum) > 1e-6 * scale) {
    std::ostringstream msg;
    msg << sln.string() << ": permutation evaluates to " << value
        << ", file states " << sol.optimum;
    throw std::invalid_argument(msg.str());
  }
  inst.known_optimum = sol.optimum;
  inst.known_permutation = sol.permutation;
  return inst;
}

}  // namespace otmatch
