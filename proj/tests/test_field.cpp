#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rigidlab/errors.hpp"
#include "rigidlab/field.hpp"

using namespace rigidlab;

namespace {

CycloElement random_element(int p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
  std::vector<Rational> c(static_cast<std::size_t>(p));
  for (auto& x : c) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return CycloElement(p, c);
}

std::complex<double> root(int p, int k) {
  return std::polar(1.0, 2.0 * std::numbers::pi * k / p);
}

}  // namespace

TEST_CASE("fp_inverse") {
  CHECK(fp_inverse(FpScalar(1, 3)).value() == 1);
  CHECK(fp_inverse(FpScalar(2, 3)).value() == 2);
  // Oracle: scan residues.
  for (int p : {2, 3, 5, 7, 11, 13})
    for (int x = 1; x < p; ++x) {
      int expected = 0;
      for (int y = 1; y < p; ++y)
        if (x * y % p == 1) expected = y;
      CHECK(fp_inverse(FpScalar(x, p)).value() == expected);
      CHECK(fp_inverse(fp_inverse(FpScalar(x, p))) == FpScalar(x, p));
    }
  CHECK(fp_inverse(FpScalar(4, 7)).value() == 2);
  CHECK_THROWS_WITH_AS(fp_inverse(FpScalar(0, 5)), doctest::Contains("non-invertible"), DomainError);
}

TEST_CASE("unsupported moduli are rejected") {
  CHECK_THROWS_AS(CycloElement(4), DomainError);
  CHECK_THROWS_AS(CycloElement(17), DomainError);
}

TEST_CASE("cyclo_mul") {
  for (int p : {2, 3, 5, 7}) {
    CHECK(CycloElement::root_power(p, 1) * CycloElement::root_power(p, p - 1) == CycloElement::one(p));
    CycloElement all_roots = CycloElement::zero(p);
    for (int k = 0; k < p; ++k) all_roots += CycloElement::root_power(p, k);
    CHECK(all_roots.is_zero());
    std::mt19937_64 rng(p);
    CHECK((all_roots * random_element(p, rng)).is_zero());
  }
  const CycloElement one_plus_w = CycloElement::one(3) + CycloElement::root_power(3, 1);
  CHECK(one_plus_w * one_plus_w == CycloElement::root_power(3, 1));
  CHECK_THROWS_AS(CycloElement::one(3) * CycloElement::one(5), DomainError);
}

TEST_CASE("canonical form") {
  std::mt19937_64 rng(7);
  for (int p : {3, 5, 7}) {
    for (int t = 0; t < 20; ++t) {
      const CycloElement a = random_element(p, rng);
      CHECK(a.coeffs().back() == 0);
      CHECK(CycloElement(p, a.coeffs()) == a);
      CHECK((a - a).is_zero());
    }
  }
}

TEST_CASE("cyclo_inverse") {
  std::mt19937_64 rng(11);
  for (int p : {2, 3, 5, 7})
    for (int t = 0; t < 10; ++t) {
      const CycloElement a = random_element(p, rng);
      if (a.is_zero()) continue;
      CHECK(a * cyclo_inverse(a) == CycloElement::one(p));
    }
  CHECK_THROWS_AS(cyclo_inverse(CycloElement::zero(5)), DomainError);
}

TEST_CASE("complex_embed") {
  CHECK(std::abs(complex_embed(CycloElement::one(5)) - std::complex<double>(1, 0)) < 1e-15);
  for (int p : {2, 3, 5, 7, 13})
    for (int k = 0; k < 2 * p; ++k) CHECK(std::abs(std::abs(complex_embed(CycloElement::root_power(p, k))) - 1) < 1e-12);
  const auto w3 = complex_embed(CycloElement::root_power(3, 1));
  CHECK(std::abs(w3 - std::complex<double>(-0.5, std::sqrt(3.0) / 2)) < 1e-12);

  std::mt19937_64 rng(3);
  for (int p : {3, 5, 7})
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(p, rng), b = random_element(p, rng);
      CHECK(std::abs(complex_embed(a * b) - complex_embed(a) * complex_embed(b)) < 1e-10 * (1 + std::abs(complex_embed(a) * complex_embed(b))));
    }
}

TEST_CASE("cyclo_dot matches repeated multiply-add") {
  std::mt19937_64 rng(5);
  for (int p : {2, 3, 5}) {
    std::vector<CycloElement> a, b;
    for (int t = 0; t < 9; ++t) {
      a.push_back(random_element(p, rng));
      b.push_back(random_element(p, rng));
    }
    CycloElement expected = CycloElement::zero(p);
    for (std::size_t t = 0; t < a.size(); ++t) expected += a[t] * b[t];
    CHECK(cyclo_dot(a, b) == expected);
  }
}

TEST_CASE("interpolate_f reproduces the bool table exactly") {
  const CycloPolynomial f2 = interpolate_f(2);
  REQUIRE(f2.degree() == 1);
  CHECK(f2.coeffs()[0].is_zero());
  CHECK(f2.coeffs()[1] == -CycloElement::one(2));

  for (int p : {2, 3, 5, 7, 11, 13}) {
    const CycloPolynomial f = interpolate_f(p);
    CHECK(f.degree() <= p - 1);
    for (int k = 0; k < 2 * p; ++k)
      CHECK(f(CycloElement::root_power(p, k)) == CycloElement(p, Rational(bool_of_residue(k % p))));
  }
}

TEST_CASE("interpolate_g reproduces roots of unity exactly") {
  for (int p : {2, 3, 5, 7}) {
    const CycloPolynomial g = interpolate_g(p);
    CHECK(g.degree() <= p * p - 1);
    for (int k = 0; k < p * p; ++k) CHECK(g(BigInt(k)) == CycloElement::root_power(p, k));
    CHECK(g(BigInt(0)) == CycloElement::one(p));
    CHECK(g(BigInt(p)) == CycloElement::one(p));
  }
}

TEST_CASE("l1_norm") {
  CHECK(l1_norm(interpolate_f(2)) == doctest::Approx(1.0));
  CHECK(l1_norm(CycloPolynomial(3, {}, 4)) == 0.0);

  // Independent floating-point Vandermonde solve for g at p = 2 and p = 3.
  for (int p : {2, 3}) {
    const int n = p * p;
    Eigen::MatrixXcd v(n, n);
    Eigen::VectorXcd y(n);
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < n; ++d) v(i, d) = std::pow(static_cast<double>(i), d);
      y(i) = root(p, i);
    }
    const Eigen::VectorXcd c = v.fullPivLu().solve(y);
    double expected = 0;
    for (int d = 0; d < n; ++d) expected += std::abs(c(d));
    CHECK(l1_norm(interpolate_g(p)) == doctest::Approx(expected).epsilon(1e-8));
  }
}
