#include "rigidlab/matrix.hpp"

#include <bit>
#include <string>

#include "rigidlab/errors.hpp"
#include "rigidlab/field.hpp"

namespace rigidlab {

namespace {

std::vector<int> inverse_table(int p) {
  std::vector<int> inv(static_cast<std::size_t>(p), 0);
  for (int x = 1; x < p; ++x) inv[static_cast<std::size_t>(x)] = fp_inverse(FpScalar(x, p)).value();
  return inv;
}

// Row-reduces m in place to reduced echelon form; returns pivot columns.
std::vector<std::size_t> rref_in_place(std::vector<int>& m, std::size_t rows, std::size_t cols, int p) {
  const auto inv = inverse_table(p);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
    const int s = inv[static_cast<std::size_t>(m[r * cols + c])];
    for (std::size_t j = 0; j < cols; ++j) m[r * cols + j] = (m[r * cols + j] * s) % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const int f = m[i * cols + c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) m[i * cols + j] = ((m[i * cols + j] - f * m[r * cols + j]) % p + p) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t power_dimension(std::size_t q, int n, std::size_t cap) {
  if (n < 0) throw DomainError("power exponent must be non-negative");
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) {
    if (dim > cap / q) throw CapExceeded("matrix power too large; use implicit evaluation");
    dim *= q;
  }
  if (dim != 0 && dim > cap / dim) throw CapExceeded("matrix power too large; use implicit evaluation");
  return dim;
}

}  // namespace

// ---------------------------------------------------------------- FpMatrix

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, int p) : rows_(rows), cols_(cols), p_(p), entries_(rows * cols, 0) {
  require_supported_prime(p);
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, int p, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), p_(p), entries_(std::move(entries)) {
  require_supported_prime(p);
  if (entries_.size() != rows * cols) throw DomainError("FpMatrix: entry count does not match shape");
  for (auto e : entries_)
    if (e >= p) throw DomainError("FpMatrix: entry " + std::to_string(e) + " not reduced mod " + std::to_string(p));
}

FpMatrix FpMatrix::identity(std::size_t n, int p) {
  FpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

FpMatrix FpMatrix::constant(std::size_t rows, std::size_t cols, int p, int value) {
  FpMatrix m(rows, cols, p);
  const auto v = static_cast<std::uint8_t>(FpScalar(value, p).value());
  std::fill(m.entries_.begin(), m.entries_.end(), v);
  return m;
}

void FpMatrix::set(std::size_t i, std::size_t j, std::int64_t value) {
  std::int64_t r = value % p_;
  if (r < 0) r += p_;
  entries_[i * cols_ + j] = static_cast<std::uint8_t>(r);
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(cols_, rows_, p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = entries_[i * cols_ + j];
  return t;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.p_ != b.p_) throw DomainError("matrix product: mismatched moduli");
  if (a.cols_ != b.rows_) throw DomainError("matrix product: inner dimensions differ");
  FpMatrix c(a.rows_, b.cols_, a.p_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
      c.set(i, j, s);
    }
  return c;
}

// -------------------------------------------------------------- SignMatrix

SignMatrix::SignMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * ((cols + 63) / 64), 0) {}

SignMatrix SignMatrix::from_values(std::size_t rows, std::size_t cols, std::span<const int> values) {
  if (values.size() != rows * cols) throw DomainError("SignMatrix: entry count does not match shape");
  SignMatrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) s.set(i, j, values[i * cols + j]);
  return s;
}

void SignMatrix::set(std::size_t i, std::size_t j, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("SignMatrix entries must be +1 or -1");
  auto& word = bits_[i * words_ + j / 64];
  const std::uint64_t bit = std::uint64_t{1} << (j % 64);
  if (sign == -1)
    word |= bit;
  else
    word &= ~bit;
}

std::uint64_t SignMatrix::column_negative_mask(std::size_t j) const {
  if (rows_ > 64) throw DomainError("column mask requires at most 64 rows");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    if (negative(i, j)) mask |= std::uint64_t{1} << i;
  return mask;
}

std::size_t SignMatrix::count_negative() const {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

// --------------------------------------------------------------- LowRankFp

LowRankFp::LowRankFp(FpMatrix u, FpMatrix v) : U(std::move(u)), V(std::move(v)) {
  if (U.rows() != V.rows()) throw DomainError("LowRankFp: U and V must have the same number of rows");
  if (U.modulus() != V.modulus()) throw DomainError("LowRankFp: mismatched moduli");
}

LowRankFp LowRankFp::from_matrix(const FpMatrix& m) {
  const int p = m.modulus();
  std::vector<int> work(m.entries().begin(), m.entries().end());
  const auto pivots = rref_in_place(work, m.rows(), m.cols(), p);
  const std::size_t r = pivots.size();
  FpMatrix u(r, m.rows(), p), v(r, m.cols(), p);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) u.set(k, i, m(i, pivots[k]));
    for (std::size_t j = 0; j < m.cols(); ++j) v.set(k, j, work[k * m.cols() + j]);
  }
  return LowRankFp(std::move(u), std::move(v));
}

int LowRankFp::entry(std::size_t i, std::size_t j) const {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < U.rows(); ++k) s += U(k, i) * V(k, j);
  return static_cast<int>(s % modulus());
}

FpMatrix LowRankFp::materialize() const {
  FpMatrix l(U.cols(), V.cols(), modulus());
  for (std::size_t i = 0; i < U.cols(); ++i)
    for (std::size_t j = 0; j < V.cols(); ++j) l.set(i, j, entry(i, j));
  return l;
}

// -------------------------------------------------------------- operations

std::size_t fp_rank(const FpMatrix& m) {
  std::vector<int> work(m.entries().begin(), m.entries().end());
  return rref_in_place(work, m.rows(), m.cols(), m.modulus()).size();
}

SignMatrix booleanize(const FpMatrix& m) {
  SignMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s.set(i, j, bool_of_residue(m(i, j)));
  return s;
}

FpMatrix sign_to_fp(const SignMatrix& s, int p) {
  FpMatrix m(s.rows(), s.cols(), p);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) m.set(i, j, s.negative(i, j) ? p - 1 : 1);
  return m;
}

std::size_t boolean_distance(const SignMatrix& a, const FpMatrix& l) {
  if (a.rows() != l.rows() || a.cols() != l.cols()) throw DomainError("boolean_distance: shape mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d += a(i, j) != bool_of_residue(l(i, j));
  return d;
}

std::size_t hamming_distance(const FpMatrix& a, const FpMatrix& l) {
  if (a.rows() != l.rows() || a.cols() != l.cols()) throw DomainError("hamming_distance: shape mismatch");
  if (a.modulus() != l.modulus()) throw DomainError("hamming_distance: mismatched moduli");
  std::size_t d = 0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) d += a.entries()[k] != l.entries()[k];
  return d;
}

namespace {

// counts[x][y] = number of digit positions i with a[x_i, y_i] == -1.
std::vector<std::uint8_t> negative_counts(const SignMatrix& a, int n) {
  const std::size_t q = a.rows();
  std::vector<std::uint8_t> counts(1, 0);
  std::size_t cur = 1;
  for (int step = 0; step < n; ++step) {
    const std::size_t next = cur * q;
    std::vector<std::uint8_t> grown(next * next);
    // Prepend one more leading digit: index = digit * cur + rest.
    for (std::size_t xa = 0; xa < q; ++xa)
      for (std::size_t ya = 0; ya < q; ++ya) {
        const std::uint8_t add = a.negative(xa, ya) ? 1 : 0;
        for (std::size_t xr = 0; xr < cur; ++xr) {
          const std::uint8_t* src = counts.data() + xr * cur;
          std::uint8_t* dst = grown.data() + (xa * cur + xr) * next + ya * cur;
          for (std::size_t yr = 0; yr < cur; ++yr) dst[yr] = static_cast<std::uint8_t>(src[yr] + add);
        }
      }
    counts.swap(grown);
    cur = next;
  }
  return counts;
}

void require_square(const SignMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("matrix power needs a non-empty square base");
}

}  // namespace

SignMatrix kron(const SignMatrix& a, const SignMatrix& b, std::size_t cap) {
  const std::size_t rows = a.rows() * b.rows(), cols = a.cols() * b.cols();
  if (cols != 0 && rows > cap / cols) throw CapExceeded("matrix product too large; use implicit evaluation");
  SignMatrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (a.negative(i, j) != b.negative(k, l)) out.set(i * b.rows() + k, j * b.cols() + l, -1);
  return out;
}

SignMatrix kron_power(const SignMatrix& a, int n, std::size_t cap) {
  require_square(a);
  if (n > 255) throw DomainError("kron_power: exponent too large");
  const std::size_t dim = power_dimension(a.rows(), n, cap);
  const auto counts = negative_counts(a, n);
  SignMatrix out(dim, dim);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y)
      if (counts[x * dim + y] & 1U) out.set(x, y, -1);
  return out;
}

SignMatrix maj_power(const SignMatrix& a, int n, std::size_t cap) {
  require_square(a);
  if (n > 255) throw DomainError("maj_power: exponent too large");
  const std::size_t dim = power_dimension(a.rows(), n, cap);
  const auto counts = negative_counts(a, n);
  SignMatrix out(dim, dim);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y)
      if (2 * static_cast<int>(counts[x * dim + y]) > n) out.set(x, y, -1);
  return out;
}

SignMatrix h1() {
  const int v[] = {1, 1, 1, -1};
  return SignMatrix::from_values(2, 2, v);
}

SignMatrix m1() {
  const int v[] = {1, -1, -1, 1};
  return SignMatrix::from_values(2, 2, v);
}

SignMatrix walsh_hadamard(int n, std::size_t cap) { return kron_power(h1(), n, cap); }

SignMatrix distance_matrix(int n, std::size_t cap) {
  if (n > 63) throw DomainError("distance_matrix: n too large");
  const std::size_t dim = power_dimension(2, n, cap);
  SignMatrix out(dim, dim);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y)
      if (2 * std::popcount(static_cast<std::uint64_t>(x ^ y)) > n) out.set(x, y, -1);
  return out;
}

}  // namespace rigidlab
