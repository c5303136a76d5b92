#include "otmatch/text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otmatch {

namespace {

bool is_separator(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == ',';
}

std::size_t as_count(double x, const char* what) {
  if (!(x >= 0.0) || x != std::floor(x) || x > 1e9) {
    std::ostringstream msg;
    msg << what << ": expected a nonnegative integer, got " << x;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<std::size_t>(x);
}

}  // namespace

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_separator(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_separator(text[end])) ++end;
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    if (*first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      std::ostringstream msg;
      msg << "non-numeric token '" << text.substr(pos, end - pos)
          << "' at position " << out.size() + 1;
      throw std::invalid_argument(msg.str());
    }
    out.push_back(value);
    pos = end;
  }
  return out;
}

SquareMatrix parse_matrix_text(std::string_view text) {
  const std::vector<double> tokens = parse_numbers(text);
  if (tokens.empty()) throw std::invalid_argument("matrix text: empty input");
  const std::size_t n = as_count(tokens[0], "matrix text order");
  if (tokens.size() - 1 != n * n) {
    std::ostringstream msg;
    msg << "matrix text: expected " << n * n << " entries for order " << n
        << ", found " << tokens.size() - 1;
    throw std::invalid_argument(msg.str());
  }
  return SquareMatrix(n, std::vector<double>(tokens.begin() + 1, tokens.end()));
}

std::string format_matrix_text(const SquareMatrix& m) {
  std::string out = std::to_string(m.order()) + "\n";
  for (std::size_t i = 0; i < m.order(); ++i) {
    for (std::size_t j = 0; j < m.order(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Permutation parse_permutation_text(std::string_view text) {
  const std::vector<double> tokens = parse_numbers(text);
  std::vector<std::size_t> map;
  map.reserve(tokens.size());
  for (double t : tokens) map.push_back(as_count(t, "permutation text"));
  return Permutation(std::move(map));
}

std::string format_permutation_text(const Permutation& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(p[k]);
  }
  out += '\n';
  return out;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_number failed");
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace otmatch
