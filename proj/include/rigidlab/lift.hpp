#pragma once
// Lifting low-rank matrices over F_p.
//
// lift_to_c turns a rank-r decomposition L = U^T V over F_p into an exact
// decomposition of bool(L) over Q(w) with (p^3+1)^r rows: with
// F = f o (g x ... x g) expanded as sum_a C_a z^a,
//
//   Ut[a, i] = C_a * u_i^a,   Vt[a, j] = v_j^a,   <Ut_i, Vt_j> = F(u_i1 v_j1, ..., u_ir v_jr) = bool(L[i,j]).
//
// booleanize_lowrank_fp does the same over F_p itself using
// bool(x) = 1 - 2 (x - 1)^{p-1}, which needs only binom(r+p-1, p-1) rows.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rigidlab/field.hpp"
#include "rigidlab/matrix.hpp"

namespace rigidlab {

inline constexpr std::size_t kDefaultTermCap = 1'000'000;

/// l1 norms of the interpolation polynomials and the derived entry-bound base
/// C = C_f * C_g^p. Cached per p.
struct LiftConstants {
  int p;
  double c_f;
  double c_g;
  double c;
};

const LiftConstants& lift_constants(int p);

/// Multivariate polynomial F(z_1..z_r) = sum_a C_a z^a with per-variable
/// degree <= p^3. Coefficients are indexed by the exponent vector a read as a
/// big-endian base-(p^3+1) integer.
class MonomialExpansion {
 public:
  MonomialExpansion(int p, int r, std::vector<CycloElement> coeffs);

  int modulus() const { return p_; }
  int variables() const { return r_; }
  std::size_t side() const { return side_; }  // p^3 + 1
  std::size_t term_count() const { return coeffs_.size(); }
  const CycloElement& coeff(std::size_t alpha_index) const { return coeffs_[alpha_index]; }
  std::vector<int> exponents(std::size_t alpha_index) const;

  /// Exact evaluation at integer arguments.
  CycloElement evaluate(std::span<const BigInt> z) const;

 private:
  int p_, r_;
  std::size_t side_;
  std::vector<CycloElement> coeffs_;
};

/// Builds F = f o G, G(z) = prod_k g(z_k), by exact expansion. Results are
/// cached per (p, r); the cache is safe for concurrent use.
std::shared_ptr<const MonomialExpansion> build_F(int p, int r, std::size_t term_cap = kDefaultTermCap);

/// Exact decomposition of bool(U^T V) over Q(w). Column i of Ut is stored
/// contiguously (length rtilde).
class LowRankCyclo {
 public:
  LowRankCyclo(LowRankFp origin, std::size_t rtilde, std::vector<CycloElement> ut, std::vector<CycloElement> vt);

  int modulus() const { return origin_.modulus(); }
  std::size_t rtilde() const { return rtilde_; }
  std::size_t size() const { return origin_.size(); }
  const LowRankFp& origin() const { return origin_; }

  std::span<const CycloElement> u_column(std::size_t i) const { return {ut_.data() + i * rtilde_, rtilde_}; }
  std::span<const CycloElement> v_column(std::size_t j) const { return {vt_.data() + j * rtilde_, rtilde_}; }

  /// Exact Ut^T Vt, row-major N x N.
  std::vector<CycloElement> product() const;
  /// Largest |complex_embed(entry)| over Ut and Vt.
  double max_entry_magnitude() const;

 private:
  LowRankFp origin_;
  std::size_t rtilde_;
  std::vector<CycloElement> ut_, vt_;
};

/// Default limit on rtilde * N stored cyclotomic entries per factor.
inline constexpr std::size_t kDefaultLiftCap = 1'000'000;

LowRankCyclo lift_to_c(const LowRankFp& l, std::size_t cap = kDefaultLiftCap);

/// True iff product == booleanize(origin) entrywise, with +1/-1 read as the
/// rational constants.
bool lift_is_exact(const LowRankCyclo& lifted);

/// Numerical rank of a complex matrix: singular values above rel_tol * sigma_max.
std::size_t numerical_rank(std::span<const std::complex<double>> entries, std::size_t rows, std::size_t cols,
                           double rel_tol = 1e-8);

/// binom(r + p - 1, p - 1): monomials of total degree <= p - 1 in r variables.
std::size_t boolean_lift_rank_bound(int p, std::size_t r);

/// Decomposition over F_p of the matrix with entries bool(L[i,j]) embedded as
/// +1 -> 1, -1 -> p-1. Throws DomainError for p = 2 (degenerate modulus).
LowRankFp booleanize_lowrank_fp(const LowRankFp& l, std::size_t cap = kDefaultTermCap);

}  // namespace rigidlab
