#include "rigidlab/field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rigidlab/errors.hpp"

namespace rigidlab {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void require_supported_prime(int p) {
  if (!is_prime(p) || p > kMaxPrime)
    throw DomainError("modulus " + std::to_string(p) + " is not a supported prime (2..13)");
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------- FpScalar

FpScalar::FpScalar(std::int64_t value, int p) : p_(p) {
  require_supported_prime(p);
  std::int64_t r = value % p;
  if (r < 0) r += p;
  value_ = static_cast<int>(r);
}

FpScalar operator+(FpScalar a, FpScalar b) {
  if (a.p_ != b.p_) throw DomainError("mismatched moduli");
  return FpScalar(a.value_ + b.value_, a.p_);
}

FpScalar operator-(FpScalar a, FpScalar b) {
  if (a.p_ != b.p_) throw DomainError("mismatched moduli");
  return FpScalar(a.value_ - b.value_, a.p_);
}

FpScalar operator*(FpScalar a, FpScalar b) {
  if (a.p_ != b.p_) throw DomainError("mismatched moduli");
  return FpScalar(static_cast<std::int64_t>(a.value_) * b.value_, a.p_);
}

FpScalar fp_inverse(FpScalar x) {
  if (x.value() == 0) throw DomainError("non-invertible: zero has no inverse mod " + std::to_string(x.modulus()));
  // Extended Euclid on (value, p).
  std::int64_t r0 = x.modulus(), r1 = x.value(), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return FpScalar(s0, x.modulus());
}

// ------------------------------------------------------------ CycloElement

namespace {

void require_same(int p, int q) {
  if (p != q) throw DomainError("mismatched cyclotomic orders: " + std::to_string(p) + " vs " + std::to_string(q));
}

// Sums rationals over a running common denominator. Denominators in the lift
// are small while numerators grow large, so this avoids a gcd against the
// full numerator on every addition.
class RationalAccumulator {
 public:
  void add(const mpz_class& num, const mpz_class& den) {
    if (mpz_divisible_p(den_.get_mpz_t(), den.get_mpz_t())) {
      mpz_class scale = den_ / den;
      num_ += num * scale;
      return;
    }
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), den.get_mpz_t());
    num_ = num_ * (l / den_) + num * (l / den);
    den_ = std::move(l);
  }
  void add_product(const Rational& a, const Rational& b) {
    add(a.get_num() * b.get_num(), a.get_den() * b.get_den());
  }
  Rational value() const {
    Rational q(num_, den_);
    q.canonicalize();
    return q;
  }

 private:
  mpz_class num_ = 0;
  mpz_class den_ = 1;
};

}  // namespace

CycloElement::CycloElement(int p) : p_(p), coeffs_(static_cast<std::size_t>(p)) {
  require_supported_prime(p);
}

CycloElement::CycloElement(int p, const Rational& constant) : CycloElement(p) { coeffs_[0] = constant; }

CycloElement::CycloElement(int p, std::vector<Rational> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
  require_supported_prime(p);
  if (coeffs_.size() > static_cast<std::size_t>(p)) {
    // Fold higher powers using w^p = 1.
    for (std::size_t k = static_cast<std::size_t>(p); k < coeffs_.size(); ++k) coeffs_[k % p] += coeffs_[k];
  }
  coeffs_.resize(static_cast<std::size_t>(p));
  canonicalize();
}

CycloElement CycloElement::root_power(int p, std::int64_t k) {
  CycloElement e(p);
  std::int64_t r = k % p;
  if (r < 0) r += p;
  e.coeffs_[static_cast<std::size_t>(r)] = 1;
  e.canonicalize();
  return e;
}

void CycloElement::canonicalize() {
  const std::size_t top = coeffs_.size() - 1;
  if (coeffs_[top] == 0) return;
  const Rational t = coeffs_[top];
  for (std::size_t k = 0; k < top; ++k) coeffs_[k] -= t;
  coeffs_[top] = 0;
}

bool CycloElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycloElement::is_rational() const {
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0) return false;
  return true;
}

CycloElement& CycloElement::operator+=(const CycloElement& other) {
  require_same(p_, other.p_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

CycloElement& CycloElement::operator-=(const CycloElement& other) {
  require_same(p_, other.p_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

CycloElement& CycloElement::operator*=(const Rational& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

CycloElement operator-(CycloElement a) {
  for (auto& c : a.coeffs_) c = -c;
  return a;
}

bool operator==(const CycloElement& a, const CycloElement& b) { return a.p_ == b.p_ && a.coeffs_ == b.coeffs_; }

CycloElement CycloElement::conjugate(int k) const {
  if (k % p_ == 0) throw DomainError("conjugation exponent must be coprime to p");
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const auto target = (j * static_cast<std::size_t>(k)) % coeffs_.size();
    out[target] += coeffs_[j];
  }
  return CycloElement(p_, std::move(out));
}

std::string CycloElement::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[k].get_str();
    if (k > 0) os << "*w^" << k;
  }
  if (first) os << "0";
  return os.str();
}

CycloElement cyclo_mul(const CycloElement& a, const CycloElement& b) {
  require_same(a.modulus(), b.modulus());
  if (b.is_rational()) return a * b.coeffs()[0];
  if (a.is_rational()) return b * a.coeffs()[0];
  const auto p = static_cast<std::size_t>(a.modulus());
  std::vector<Rational> out(p);
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  for (std::size_t i = 0; i < p; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < p; ++j) {
      if (y[j] == 0) continue;
      out[(i + j) % p] += x[i] * y[j];
    }
  }
  return CycloElement(a.modulus(), std::move(out));
}

CycloElement operator*(const CycloElement& a, const CycloElement& b) { return cyclo_mul(a, b); }

CycloElement cyclo_inverse(const CycloElement& a) {
  if (a.is_zero()) throw DomainError("non-invertible: zero cyclotomic element");
  if (a.is_rational()) return CycloElement(a.modulus(), Rational(1) / a.coeffs()[0]);
  CycloElement others = CycloElement::one(a.modulus());
  for (int k = 2; k < a.modulus(); ++k) others = others * a.conjugate(k);
  const CycloElement norm = a * others;
  if (!norm.is_rational()) throw std::logic_error("cyclotomic norm is not rational");
  return others * (Rational(1) / norm.coeffs()[0]);
}

CycloElement cyclo_dot(std::span<const CycloElement> a, std::span<const CycloElement> b) {
  if (a.size() != b.size()) throw DomainError("cyclo_dot: length mismatch");
  if (a.empty()) throw DomainError("cyclo_dot: empty input has no modulus");
  const int p = a[0].modulus();
  const auto n = static_cast<std::size_t>(p);
  std::vector<RationalAccumulator> acc(n);
  for (std::size_t t = 0; t < a.size(); ++t) {
    require_same(p, a[t].modulus());
    require_same(p, b[t].modulus());
    const auto& x = a[t].coeffs();
    const auto& y = b[t].coeffs();
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        acc[(i + j) % n].add_product(x[i], y[j]);
      }
    }
  }
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].value();
  return CycloElement(p, std::move(out));
}

std::complex<double> complex_embed(const CycloElement& a) {
  const int p = a.modulus();
  std::complex<double> z = 0.0;
  for (int k = 0; k < p; ++k) {
    const auto& c = a.coeffs()[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    const double angle = 2.0 * std::numbers::pi * k / p;
    z += c.get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return z;
}

// --------------------------------------------------------- CycloPolynomial

CycloPolynomial::CycloPolynomial(int p, std::vector<CycloElement> coeffs, int degree_bound)
    : p_(p), coeffs_(std::move(coeffs)), degree_bound_(degree_bound) {
  require_supported_prime(p);
  for (const auto& c : coeffs_) require_same(p, c.modulus());
  trim();
  if (degree() > degree_bound_)
    throw DomainError("polynomial degree " + std::to_string(degree()) + " exceeds bound " +
                      std::to_string(degree_bound_));
}

void CycloPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

int CycloPolynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

CycloElement CycloPolynomial::operator()(const CycloElement& x) const {
  CycloElement acc = CycloElement::zero(p_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

CycloElement CycloPolynomial::operator()(const BigInt& x) const {
  const Rational xq(x);
  CycloElement acc = CycloElement::zero(p_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= xq;
    acc += *it;
  }
  return acc;
}

CycloPolynomial operator*(const CycloPolynomial& a, const CycloPolynomial& b) {
  require_same(a.p_, b.p_);
  const int bound = a.degree_bound_ + b.degree_bound_;
  if (a.coeffs_.empty() || b.coeffs_.empty()) return CycloPolynomial(a.p_, {}, bound);
  std::vector<CycloElement> out(a.coeffs_.size() + b.coeffs_.size() - 1, CycloElement::zero(a.p_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return CycloPolynomial(a.p_, std::move(out), bound);
}

CycloPolynomial interpolate(int p, std::span<const CycloElement> nodes, std::span<const CycloElement> values) {
  if (nodes.size() != values.size()) throw DomainError("interpolate: node/value count mismatch");
  const std::size_t n = nodes.size();
  if (n == 0) throw DomainError("interpolate: no nodes");

  // Augmented Vandermonde [x_i^d | y_i], row-major with n+1 columns.
  std::vector<CycloElement> m;
  m.reserve(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    CycloElement power = CycloElement::one(p);
    for (std::size_t d = 0; d < n; ++d) {
      m.push_back(power);
      power = power * nodes[i];
    }
    m.push_back(values[i]);
  }
  const std::size_t w = n + 1;
  auto at = [&](std::size_t i, std::size_t j) -> CycloElement& { return m[i * w + j]; };

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw DomainError("interpolate: nodes are not distinct");
    if (pivot != col)
      for (std::size_t j = 0; j < w; ++j) std::swap(at(pivot, j), at(col, j));
    const CycloElement inv = cyclo_inverse(at(col, col));
    for (std::size_t j = col; j < w; ++j) at(col, j) = at(col, j) * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || at(i, col).is_zero()) continue;
      const CycloElement factor = at(i, col);
      for (std::size_t j = col; j < w; ++j) {
        if (at(col, j).is_zero()) continue;
        at(i, j) -= factor * at(col, j);
      }
    }
  }

  std::vector<CycloElement> coeffs;
  coeffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) coeffs.push_back(at(i, n));
  return CycloPolynomial(p, std::move(coeffs), static_cast<int>(n) - 1);
}

CycloPolynomial interpolate_f(int p) {
  require_supported_prime(p);
  std::vector<CycloElement> nodes, values;
  for (int k = 0; k < p; ++k) {
    nodes.push_back(CycloElement::root_power(p, k));
    values.emplace_back(p, Rational(bool_of_residue(k)));
  }
  return interpolate(p, nodes, values);
}

CycloPolynomial interpolate_g(int p) {
  require_supported_prime(p);
  std::vector<CycloElement> nodes, values;
  for (int k = 0; k < p * p; ++k) {
    nodes.emplace_back(p, Rational(k));
    values.push_back(CycloElement::root_power(p, k));
  }
  return interpolate(p, nodes, values);
}

double l1_norm(const CycloPolynomial& f) {
  double total = 0.0;
  for (const auto& c : f.coeffs()) total += std::abs(complex_embed(c));
  return total;
}

}  // namespace rigidlab
