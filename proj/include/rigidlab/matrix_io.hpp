#pragma once
// Plain-text matrix files:
//
//   fp <p> <rows> <cols>        or     sign <rows> <cols>
//   <rows lines of space-separated residues, or 1 / -1>
//
// Whitespace between tokens is free-form; the trailing newline is optional.

#include <iosfwd>
#include <string>
#include <variant>

#include "rigidlab/matrix.hpp"

namespace rigidlab {

using AnyMatrix = std::variant<FpMatrix, SignMatrix>;

AnyMatrix read_matrix(std::istream& in);
AnyMatrix read_matrix_file(const std::string& path);
AnyMatrix parse_matrix(const std::string& text);

void write_matrix(std::ostream& out, const FpMatrix& m);
void write_matrix(std::ostream& out, const SignMatrix& m);
std::string format_matrix(const AnyMatrix& m);

}  // namespace rigidlab
