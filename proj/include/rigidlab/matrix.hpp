#pragma once
// Dense matrices over F_p and over {-1,+1}, plus the Kronecker / Majority
// power generators. Row and column indices of q^n x q^n powers encode digit
// strings (x_1, ..., x_n) big-endian: x_1 is the most significant digit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rigidlab {

inline constexpr std::size_t kDefaultMaterializationCap = std::size_t{1} << 26;

class FpMatrix {
 public:
  FpMatrix(std::size_t rows, std::size_t cols, int p);
  FpMatrix(std::size_t rows, std::size_t cols, int p, std::vector<std::uint8_t> entries);

  static FpMatrix identity(std::size_t n, int p);
  static FpMatrix constant(std::size_t rows, std::size_t cols, int p, int value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int modulus() const { return p_; }

  int operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t value);

  std::span<const std::uint8_t> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }

  FpMatrix transpose() const;
  friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
  friend bool operator==(const FpMatrix& a, const FpMatrix& b) = default;

 private:
  std::size_t rows_, cols_;
  int p_;
  std::vector<std::uint8_t> entries_;
};

/// Matrix with entries in {-1, +1}, bit-packed one bit per entry
/// (+1 -> 0, -1 -> 1) so agreement counts reduce to popcounts.
class SignMatrix {
 public:
  SignMatrix(std::size_t rows, std::size_t cols);  // all +1
  static SignMatrix from_values(std::size_t rows, std::size_t cols, std::span<const int> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  int operator()(std::size_t i, std::size_t j) const { return negative(i, j) ? -1 : 1; }
  bool negative(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j, int sign);

  /// Packed row i (bit j set iff entry is -1).
  std::span<const std::uint64_t> row_bits(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
  /// Column j as a single word (bit i set iff entry is -1). Requires rows <= 64.
  std::uint64_t column_negative_mask(std::size_t j) const;

  std::size_t count_negative() const;
  std::size_t count_positive() const { return rows_ * cols_ - count_negative(); }

  friend bool operator==(const SignMatrix& a, const SignMatrix& b) = default;

 private:
  std::size_t rows_, cols_, words_;
  std::vector<std::uint64_t> bits_;
};

/// Explicit decomposition L = U^T V with U, V both r x N over F_p.
struct LowRankFp {
  FpMatrix U;
  FpMatrix V;

  LowRankFp(FpMatrix u, FpMatrix v);
  /// Rank factorization of an arbitrary matrix (r = fp_rank(m)).
  static LowRankFp from_matrix(const FpMatrix& m);

  std::size_t rank_bound() const { return U.rows(); }
  std::size_t size() const { return U.cols(); }
  int modulus() const { return U.modulus(); }
  /// L[i,j] = <u_i, v_j> mod p without materializing.
  int entry(std::size_t i, std::size_t j) const;
  FpMatrix materialize() const;
};

/// Row rank over F_p by Gaussian elimination.
std::size_t fp_rank(const FpMatrix& m);

/// Entrywise Booleanization: +1 iff the residue is 1.
SignMatrix booleanize(const FpMatrix& m);

/// +1 -> 1, -1 -> p-1. At p = 2 both signs map to residue 1 (sign-degenerate).
FpMatrix sign_to_fp(const SignMatrix& s, int p);

/// Number of entries with a(i,j) != bool(l(i,j)). Throws on shape mismatch.
std::size_t boolean_distance(const SignMatrix& a, const FpMatrix& l);

/// Number of entries where a and l differ as residues.
std::size_t hamming_distance(const FpMatrix& a, const FpMatrix& l);

/// Kronecker product: (a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l].
SignMatrix kron(const SignMatrix& a, const SignMatrix& b, std::size_t cap = kDefaultMaterializationCap);
SignMatrix kron_power(const SignMatrix& a, int n, std::size_t cap = kDefaultMaterializationCap);
/// Majority power with ties (sum == 0) resolved to +1.
SignMatrix maj_power(const SignMatrix& a, int n, std::size_t cap = kDefaultMaterializationCap);

SignMatrix h1();  // [[1, 1], [1, -1]]
SignMatrix m1();  // [[1, -1], [-1, 1]]
SignMatrix walsh_hadamard(int n, std::size_t cap = kDefaultMaterializationCap);
/// M_n[x,y] = +1 iff the Hamming distance of the n-bit strings x, y is <= n/2.
SignMatrix distance_matrix(int n, std::size_t cap = kDefaultMaterializationCap);

}  // namespace rigidlab
