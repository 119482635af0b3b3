#include "rigidlab/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "rigidlab/errors.hpp"

namespace rigidlab {

namespace {

std::size_t checked_pow(std::size_t base, int exp, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (int k = 0; k < exp; ++k) {
    if (out > cap / base) throw CapExceeded(std::string(what) + " exceeds cap " + std::to_string(cap));
    out *= base;
  }
  if (out > cap) throw CapExceeded(std::string(what) + " exceeds cap " + std::to_string(cap));
  return out;
}

// Univariate powers g^0, ..., g^{p-1}, cached per p.
const std::vector<CycloPolynomial>& g_powers(int p) {
  static std::mutex mu;
  static std::map<int, std::vector<CycloPolynomial>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  const CycloPolynomial g = interpolate_g(p);
  std::vector<CycloPolynomial> powers;
  powers.emplace_back(p, std::vector<CycloElement>{CycloElement::one(p)}, 0);
  for (int j = 1; j < p; ++j) powers.push_back(powers.back() * g);
  return cache.emplace(p, std::move(powers)).first->second;
}

// Advances a big-endian odometer over [0, side)^r. Returns false on wrap.
bool advance(std::vector<int>& digits, int side) {
  for (auto k = digits.size(); k-- > 0;) {
    if (++digits[k] < side) return true;
    digits[k] = 0;
  }
  return false;
}

}  // namespace

const LiftConstants& lift_constants(int p) {
  require_supported_prime(p);
  static std::mutex mu;
  static std::map<int, LiftConstants> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  const double c_f = l1_norm(interpolate_f(p));
  const double c_g = l1_norm(interpolate_g(p));
  const LiftConstants constants{p, c_f, c_g, c_f * std::pow(c_g, p)};
  std::lock_guard lock(mu);
  return cache.emplace(p, constants).first->second;
}

// ------------------------------------------------------- MonomialExpansion

MonomialExpansion::MonomialExpansion(int p, int r, std::vector<CycloElement> coeffs)
    : p_(p), r_(r), side_(static_cast<std::size_t>(p) * p * p + 1), coeffs_(std::move(coeffs)) {
  require_supported_prime(p);
  if (r < 0) throw DomainError("negative variable count");
  std::size_t expected = 1;
  for (int k = 0; k < r; ++k) expected *= side_;
  if (coeffs_.size() != expected) throw DomainError("monomial expansion: wrong coefficient count");
}

std::vector<int> MonomialExpansion::exponents(std::size_t alpha_index) const {
  std::vector<int> out(static_cast<std::size_t>(r_));
  for (auto k = out.size(); k-- > 0;) {
    out[k] = static_cast<int>(alpha_index % side_);
    alpha_index /= side_;
  }
  return out;
}

CycloElement MonomialExpansion::evaluate(std::span<const BigInt> z) const {
  if (z.size() != static_cast<std::size_t>(r_)) throw DomainError("evaluate: wrong argument count");
  std::vector<std::vector<BigInt>> powers(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    powers[k].resize(side_);
    powers[k][0] = 1;
    for (std::size_t e = 1; e < side_; ++e) powers[k][e] = powers[k][e - 1] * z[k];
  }
  CycloElement acc = CycloElement::zero(p_);
  std::vector<int> alpha(z.size(), 0);
  std::size_t index = 0;
  do {
    const auto& c = coeffs_[index++];
    if (c.is_zero()) continue;
    BigInt mono = 1;
    for (std::size_t k = 0; k < z.size(); ++k) mono *= powers[k][static_cast<std::size_t>(alpha[k])];
    if (mono != 0) acc += c * Rational(mono);
  } while (advance(alpha, static_cast<int>(side_)));
  return acc;
}

std::shared_ptr<const MonomialExpansion> build_F(int p, int r, std::size_t term_cap) {
  require_supported_prime(p);
  if (r < 0) throw DomainError("negative rank");
  const auto side = static_cast<std::size_t>(p) * p * p + 1;
  const std::size_t terms = checked_pow(side, r, term_cap, "monomial count (p^3+1)^r");

  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialExpansion>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({p, r});
    if (it != cache.end()) return it->second;
  }

  const CycloPolynomial f = interpolate_f(p);
  const auto& gp = g_powers(p);
  std::vector<CycloElement> coeffs;
  coeffs.reserve(terms);
  std::vector<int> alpha(static_cast<std::size_t>(r), 0);
  do {
    CycloElement c = CycloElement::zero(p);
    for (std::size_t j = 0; j < f.coeffs().size(); ++j) {
      if (f.coeffs()[j].is_zero()) continue;
      const auto& gj = gp[j].coeffs();
      CycloElement term = f.coeffs()[j];
      bool zero = false;
      for (int a : alpha) {
        const auto e = static_cast<std::size_t>(a);
        if (e >= gj.size() || gj[e].is_zero()) {
          zero = true;
          break;
        }
        term = term * gj[e];
      }
      if (!zero) c += term;
    }
    coeffs.push_back(std::move(c));
  } while (advance(alpha, static_cast<int>(side)));

  auto built = std::make_shared<const MonomialExpansion>(p, r, std::move(coeffs));
  std::lock_guard lock(mu);
  return cache.emplace(std::make_pair(p, r), std::move(built)).first->second;
}

// ------------------------------------------------------------ LowRankCyclo

LowRankCyclo::LowRankCyclo(LowRankFp origin, std::size_t rtilde, std::vector<CycloElement> ut,
                           std::vector<CycloElement> vt)
    : origin_(std::move(origin)), rtilde_(rtilde), ut_(std::move(ut)), vt_(std::move(vt)) {
  const std::size_t expected = rtilde_ * origin_.size();
  if (ut_.size() != expected || vt_.size() != expected) throw DomainError("LowRankCyclo: wrong factor size");
}

std::vector<CycloElement> LowRankCyclo::product() const {
  const std::size_t n = size();
  std::vector<CycloElement> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.push_back(cyclo_dot(u_column(i), v_column(j)));
  return out;
}

double LowRankCyclo::max_entry_magnitude() const {
  double best = 0.0;
  for (const auto* factor : {&ut_, &vt_})
    for (const auto& e : *factor) best = std::max(best, std::abs(complex_embed(e)));
  return best;
}

LowRankCyclo lift_to_c(const LowRankFp& l, std::size_t cap) {
  const int p = l.modulus();
  const int r = static_cast<int>(l.rank_bound());
  const std::size_t n = l.size();
  const auto expansion = build_F(p, r);
  const std::size_t rtilde = expansion->term_count();
  if (n != 0 && rtilde > cap / n)
    throw CapExceeded("lift size (p^3+1)^r * N exceeds cap " + std::to_string(cap));
  const int side = static_cast<int>(expansion->side());

  // Column i of a factor: x^alpha for x = (column i of U or V) over all alpha.
  auto monomials = [&](const FpMatrix& m, std::size_t i, bool scale, std::vector<CycloElement>& out) {
    std::vector<std::vector<BigInt>> powers(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
      auto& row = powers[static_cast<std::size_t>(k)];
      row.resize(static_cast<std::size_t>(side));
      row[0] = 1;
      const BigInt base = m(static_cast<std::size_t>(k), i);
      for (int e = 1; e < side; ++e) row[static_cast<std::size_t>(e)] = row[static_cast<std::size_t>(e) - 1] * base;
    }
    std::vector<int> alpha(static_cast<std::size_t>(r), 0);
    std::size_t index = 0;
    do {
      const auto& c = expansion->coeff(index++);
      if (scale && c.is_zero()) {
        out.push_back(CycloElement::zero(p));
        continue;
      }
      BigInt mono = 1;
      for (int k = 0; k < r; ++k)
        mono *= powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(k)])];
      out.push_back(scale ? c * Rational(mono) : CycloElement(p, Rational(mono)));
    } while (advance(alpha, side));
  };

  std::vector<CycloElement> ut, vt;
  ut.reserve(rtilde * n);
  vt.reserve(rtilde * n);
  for (std::size_t i = 0; i < n; ++i) {
    monomials(l.U, i, true, ut);
    monomials(l.V, i, false, vt);
  }
  return LowRankCyclo(l, rtilde, std::move(ut), std::move(vt));
}

bool lift_is_exact(const LowRankCyclo& lifted) {
  const SignMatrix expected = booleanize(lifted.origin().materialize());
  const std::size_t n = lifted.size();
  const int p = lifted.modulus();
  const CycloElement plus = CycloElement::one(p);
  const CycloElement minus = -plus;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (cyclo_dot(lifted.u_column(i), lifted.v_column(j)) != (expected.negative(i, j) ? minus : plus)) return false;
  return true;
}

std::size_t numerical_rank(std::span<const std::complex<double>> entries, std::size_t rows, std::size_t cols,
                           double rel_tol) {
  if (entries.size() != rows * cols) throw DomainError("numerical_rank: entry count mismatch");
  if (rows == 0 || cols == 0) return 0;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * cols + j];
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * s(0)) ++rank;
  return rank;
}

// ------------------------------------------------- Boolean lift over F_p

std::size_t boolean_lift_rank_bound(int p, std::size_t r) {
  require_supported_prime(p);
  // binom(r + p - 1, p - 1) built as prod_{k=1}^{p-1} (r + k) / k; each
  // partial product is itself a binomial coefficient, so division is exact.
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t out = 1;
  for (std::size_t k = 1; k < static_cast<std::size_t>(p); ++k) {
    if (out > kMax / (r + k)) return kMax;
    out = out * (r + k) / k;
  }
  return out;
}

LowRankFp booleanize_lowrank_fp(const LowRankFp& l, std::size_t cap) {
  const int p = l.modulus();
  if (p == 2) throw DomainError("degenerate modulus: bool is constant over F_2");
  const std::size_t r = l.rank_bound();
  const std::size_t n = l.size();
  const std::size_t rows = boolean_lift_rank_bound(p, r);
  if (rows > cap) throw CapExceeded("Boolean lift rank binom(r+p-1, p-1) exceeds cap " + std::to_string(cap));

  std::vector<std::int64_t> factorial(static_cast<std::size_t>(p), 1);
  for (std::size_t k = 1; k < factorial.size(); ++k) factorial[k] = factorial[k - 1] * static_cast<std::int64_t>(k);
  std::vector<std::int64_t> binom_top(static_cast<std::size_t>(p));  // binom(p-1, m)
  for (int m = 0; m < p; ++m) binom_top[static_cast<std::size_t>(m)] = factorial[static_cast<std::size_t>(p - 1)] /
                                                                      (factorial[static_cast<std::size_t>(m)] *
                                                                       factorial[static_cast<std::size_t>(p - 1 - m)]);

  // pw[k][i][e] = x_{k,i}^e mod p for e < p.
  auto power_table = [&](const FpMatrix& m) {
    std::vector<int> t(r * n * static_cast<std::size_t>(p));
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        int v = 1;
        for (int e = 0; e < p; ++e) {
          t[(k * n + i) * static_cast<std::size_t>(p) + static_cast<std::size_t>(e)] = v;
          v = v * m(k, i) % p;
        }
      }
    return t;
  };
  const auto pu = power_table(l.U);
  const auto pv = power_table(l.V);
  auto pw = [&](const std::vector<int>& t, std::size_t k, std::size_t i, int e) {
    return t[(k * n + i) * static_cast<std::size_t>(p) + static_cast<std::size_t>(e)];
  };

  FpMatrix u(rows, n, p), v(rows, n, p);
  std::vector<int> beta(r, 0);
  std::size_t row = 0;
  // Lexicographic enumeration of beta with |beta| <= p - 1.
  auto emit = [&](int total) {
    std::int64_t multinom = factorial[static_cast<std::size_t>(total)];
    for (int b : beta) multinom /= factorial[static_cast<std::size_t>(b)];
    const std::int64_t sign = (p - 1 - total) % 2 == 0 ? 1 : -1;
    std::int64_t c = -2 * binom_top[static_cast<std::size_t>(total)] * sign * multinom;
    if (total == 0) c += 1;
    const FpScalar coeff(c, p);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t mu = coeff.value(), mv = 1;
      for (std::size_t k = 0; k < r; ++k) {
        mu = mu * pw(pu, k, i, beta[k]) % p;
        mv = mv * pw(pv, k, i, beta[k]) % p;
      }
      u.set(row, i, mu);
      v.set(row, i, mv);
    }
    ++row;
  };
  auto recurse = [&](auto&& self, std::size_t k, int total) -> void {
    if (k == r) {
      emit(total);
      return;
    }
    for (int b = 0; total + b <= p - 1; ++b) {
      beta[k] = b;
      self(self, k + 1, total + b);
    }
    beta[k] = 0;
  };
  recurse(recurse, 0, 0);
  if (row != rows) throw std::logic_error("Boolean lift enumerated an unexpected monomial count");
  return LowRankFp(std::move(u), std::move(v));
}

}  // namespace rigidlab
