#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "otmatch/matrix.hpp"
#include "otmatch/permutation.hpp"

namespace otmatch {

// Whitespace-separated numeric tokens. Commas count as whitespace.
// Throws std::invalid_argument naming the 1-based token position of the first
// non-numeric token.
std::vector<double> parse_numbers(std::string_view text);

// Matrix text format: n followed by n*n row-major entries.
SquareMatrix parse_matrix_text(std::string_view text);
std::string format_matrix_text(const SquareMatrix& m);

// Permutation text format: n whitespace-separated 0-based indices.
Permutation parse_permutation_text(std::string_view text);
std::string format_permutation_text(const Permutation& p);

// Shortest decimal text that round-trips the double; integers print without
// a fractional part.
std::string format_number(double x);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace otmatch
