#pragma once
// Exact arithmetic: residues mod a small prime, rationals, and the cyclotomic
// field Q(w) with w = exp(2*pi*i/p).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace rigidlab {

using Rational = mpq_class;
using BigInt = mpz_class;

inline constexpr int kMaxPrime = 13;

bool is_prime(int p);

/// Throws DomainError unless p is a prime in [2, kMaxPrime].
void require_supported_prime(int p);

/// Renders a rational as "a/b" (or "a" when the denominator is 1).
std::string to_string(const Rational& q);

class FpScalar {
 public:
  FpScalar(std::int64_t value, int p);

  int value() const { return value_; }
  int modulus() const { return p_; }

  friend FpScalar operator+(FpScalar a, FpScalar b);
  friend FpScalar operator-(FpScalar a, FpScalar b);
  friend FpScalar operator*(FpScalar a, FpScalar b);
  friend bool operator==(FpScalar a, FpScalar b) = default;

 private:
  int value_;
  int p_;
};

/// Multiplicative inverse. Throws DomainError("non-invertible") on zero.
FpScalar fp_inverse(FpScalar x);

/// +1 if x == 1 (mod p), -1 otherwise.
inline int bool_of_residue(int residue) { return residue == 1 ? 1 : -1; }

/// Element of Q(w) stored as p rational coefficients of 1, w, ..., w^{p-1}.
/// The canonical form eliminates the w^{p-1} coefficient using
/// 1 + w + ... + w^{p-1} = 0, so equal field elements have equal vectors.
class CycloElement {
 public:
  explicit CycloElement(int p);
  CycloElement(int p, const Rational& constant);
  CycloElement(int p, std::vector<Rational> coeffs);

  static CycloElement zero(int p) { return CycloElement(p); }
  static CycloElement one(int p) { return CycloElement(p, Rational(1)); }
  /// w^k for any integer k.
  static CycloElement root_power(int p, std::int64_t k);

  int modulus() const { return p_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// True when only the constant coefficient may be nonzero.
  bool is_rational() const;

  CycloElement& operator+=(const CycloElement& other);
  CycloElement& operator-=(const CycloElement& other);
  CycloElement& operator*=(const Rational& scalar);

  friend CycloElement operator+(CycloElement a, const CycloElement& b) { return a += b; }
  friend CycloElement operator-(CycloElement a, const CycloElement& b) { return a -= b; }
  friend CycloElement operator*(CycloElement a, const Rational& s) { return a *= s; }
  friend CycloElement operator-(CycloElement a);
  friend bool operator==(const CycloElement& a, const CycloElement& b);

  /// Galois conjugate w -> w^k, k coprime to p.
  CycloElement conjugate(int k) const;

  std::string str() const;

 private:
  void canonicalize();

  int p_;
  std::vector<Rational> coeffs_;
};

/// Exact product in canonical form. Throws DomainError on mismatched p.
CycloElement cyclo_mul(const CycloElement& a, const CycloElement& b);
CycloElement operator*(const CycloElement& a, const CycloElement& b);

/// Exact inverse via the product of the nontrivial Galois conjugates divided
/// by the (rational) norm. Throws DomainError on zero.
CycloElement cyclo_inverse(const CycloElement& a);

/// Sum_k a_k * b_k without intermediate canonicalization of rational parts.
CycloElement cyclo_dot(std::span<const CycloElement> a, std::span<const CycloElement> b);

/// sum_k coeffs[k] * exp(2*pi*i*k/p) in double precision.
std::complex<double> complex_embed(const CycloElement& a);

/// Univariate polynomial over Q(w); coeffs[d] is the degree-d coefficient.
class CycloPolynomial {
 public:
  CycloPolynomial(int p, std::vector<CycloElement> coeffs, int degree_bound);

  int modulus() const { return p_; }
  int degree() const;  // -1 for the zero polynomial
  int degree_bound() const { return degree_bound_; }
  const std::vector<CycloElement>& coeffs() const { return coeffs_; }

  CycloElement operator()(const CycloElement& x) const;
  CycloElement operator()(const BigInt& x) const;

  /// Product of two polynomials; the result's bound is the sum of the bounds.
  friend CycloPolynomial operator*(const CycloPolynomial& a, const CycloPolynomial& b);

 private:
  void trim();

  int p_;
  std::vector<CycloElement> coeffs_;
  int degree_bound_;
};

/// Solves the Vandermonde system sum_d c_d x_i^d = y_i by exact Gaussian
/// elimination over Q(w). Nodes must be distinct.
CycloPolynomial interpolate(int p, std::span<const CycloElement> nodes,
                            std::span<const CycloElement> values);

/// f with f(w^k) = bool(k) for k in [0, p). Degree <= p-1.
CycloPolynomial interpolate_f(int p);

/// g with g(k) = w^k for integers k in [0, p^2). Degree <= p^2-1.
CycloPolynomial interpolate_g(int p);

/// Sum of |complex_embed(c)| over all coefficients.
double l1_norm(const CycloPolynomial& f);

}  // namespace rigidlab
