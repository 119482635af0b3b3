#include "rigidlab/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "rigidlab/errors.hpp"

namespace rigidlab {

namespace {

long long next_int(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw DomainError(std::string("matrix file: missing ") + what);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) throw DomainError(std::string("matrix file: bad ") + what + " '" + token + "'");
  return v;
}

std::size_t next_dim(std::istream& in, const char* what) {
  const long long v = next_int(in, what);
  if (v < 0) throw DomainError(std::string("matrix file: negative ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

AnyMatrix read_matrix(std::istream& in) {
  std::string kind;
  if (!(in >> kind)) throw DomainError("matrix file: empty input");
  if (kind == "fp") {
    const long long p = next_int(in, "modulus");
    const std::size_t rows = next_dim(in, "row count");
    const std::size_t cols = next_dim(in, "column count");
    std::vector<std::uint8_t> entries;
    entries.reserve(rows * cols);
    for (std::size_t k = 0; k < rows * cols; ++k) {
      const long long v = next_int(in, "entry");
      if (v < 0 || v >= p) throw DomainError("matrix file: residue " + std::to_string(v) + " out of range");
      entries.push_back(static_cast<std::uint8_t>(v));
    }
    return FpMatrix(rows, cols, static_cast<int>(p), std::move(entries));
  }
  if (kind == "sign") {
    const std::size_t rows = next_dim(in, "row count");
    const std::size_t cols = next_dim(in, "column count");
    SignMatrix s(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const long long v = next_int(in, "entry");
        if (v != 1 && v != -1) throw DomainError("matrix file: sign entry must be 1 or -1");
        s.set(i, j, static_cast<int>(v));
      }
    return s;
  }
  throw DomainError("matrix file: unknown header '" + kind + "' (expected fp or sign)");
}

AnyMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  try {
    return read_matrix(in);
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

AnyMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const FpMatrix& m) {
  out << "fp " << m.modulus() << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const SignMatrix& m) {
  out << "sign " << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

std::string format_matrix(const AnyMatrix& m) {
  std::ostringstream os;
  std::visit([&](const auto& x) { write_matrix(os, x); }, m);
  return os.str();
}

}  // namespace rigidlab
