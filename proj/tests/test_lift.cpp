#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "rigidlab/errors.hpp"
#include "rigidlab/lift.hpp"
#include "support.hpp"

using namespace rigidlab;

namespace {

// Floating-point l1 norm of the interpolant through (x_i, y_i), solved
// independently of the exact code path.
double float_interp_l1(const std::vector<std::complex<double>>& x, const std::vector<std::complex<double>>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXcd v(n, n);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> power = 1.0;
    for (Eigen::Index d = 0; d < n; ++d) {
      v(i, d) = power;
      power *= x[static_cast<std::size_t>(i)];
    }
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXcd c = v.fullPivLu().solve(rhs);
  return c.cwiseAbs().sum();
}

std::complex<double> w(int p, int k) { return std::polar(1.0, 2 * std::numbers::pi * k / p); }

CycloElement signed_one(int p, int s) { return CycloElement(p, Rational(s)); }

}  // namespace

TEST_CASE("lift constants from independent interpolation") {
  for (int p : {2, 3}) {
    std::vector<std::complex<double>> fx, fy, gx, gy;
    for (int k = 0; k < p; ++k) {
      fx.push_back(w(p, k));
      fy.push_back(k == 1 ? 1.0 : -1.0);
    }
    for (int k = 0; k < p * p; ++k) {
      gx.push_back(static_cast<double>(k));
      gy.push_back(w(p, k));
    }
    const double cf = float_interp_l1(fx, fy), cg = float_interp_l1(gx, gy);
    const auto& lc = lift_constants(p);
    CHECK(lc.c_f == doctest::Approx(cf).epsilon(1e-9));
    CHECK(lc.c_g == doctest::Approx(cg).epsilon(1e-7));
    CHECK(lc.c == doctest::Approx(cf * std::pow(cg, p)).epsilon(1e-6));
  }
}

TEST_CASE("build_F") {
  const auto f21 = build_F(2, 1);
  CHECK(f21->term_count() == 9);
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      const BigInt z[] = {BigInt(u * v)};
      CHECK(f21->evaluate(z) == signed_one(2, bool_of_residue(u * v % 2)));
    }

  const auto f22 = build_F(2, 2);
  CHECK(f22->term_count() == 81);
  for (int code = 0; code < 16; ++code) {
    const int u1 = code & 1, u2 = (code >> 1) & 1, v1 = (code >> 2) & 1, v2 = (code >> 3) & 1;
    const BigInt z[] = {BigInt(u1 * v1), BigInt(u2 * v2)};
    CHECK(f22->evaluate(z) == signed_one(2, bool_of_residue((u1 * v1 + u2 * v2) % 2)));
  }

  const auto f32 = build_F(3, 2);
  CHECK(f32->term_count() == 784);
  std::mt19937_64 rng(20);
  for (int t = 0; t < 20; ++t) {
    int u[2], v[2];
    for (int k = 0; k < 2; ++k) {
      u[k] = static_cast<int>(rng() % 3);
      v[k] = static_cast<int>(rng() % 3);
    }
    const BigInt z[] = {BigInt(u[0] * v[0]), BigInt(u[1] * v[1])};
    CHECK(f32->evaluate(z) == signed_one(3, bool_of_residue((u[0] * v[0] + u[1] * v[1]) % 3)));
  }

  CHECK(build_F(3, 2).get() == f32.get());
  CHECK_THROWS_AS(build_F(5, 3, 100'000), CapExceeded);
  CHECK(f32->exponents(29) == std::vector<int>{1, 1});
}

TEST_CASE("lift_to_c examples") {
  const std::size_t n = 4;
  const LowRankFp ones(FpMatrix::constant(1, n, 3, 1), FpMatrix::constant(1, n, 3, 1));
  const auto lifted_ones = lift_to_c(ones);
  CHECK(lifted_ones.rtilde() == 28);
  for (const auto& e : lifted_ones.product()) CHECK(e == CycloElement::one(3));

  const LowRankFp zero(FpMatrix(1, n, 3), FpMatrix(1, n, 3));
  for (const auto& e : lift_to_c(zero).product()) CHECK(e == signed_one(3, -1));

  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const auto l = testsupport::random_lowrank(1, 4, 2, rng);
    const auto lifted = lift_to_c(l);
    const auto expected = booleanize(l.materialize());
    const auto prod = lifted.product();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(prod[i * 4 + j] == signed_one(2, expected(i, j)));
    CHECK(lift_is_exact(lifted));
    CHECK(lifted.max_entry_magnitude() <= lift_constants(2).c + 1e-6);

    std::vector<std::complex<double>> embedded;
    for (const auto& e : prod) embedded.push_back(complex_embed(e));
    CHECK(numerical_rank(embedded, 4, 4) <= lifted.rtilde());
  }

  CHECK_THROWS_AS(lift_to_c(testsupport::random_lowrank(2, 6, 3, rng), 1000), CapExceeded);
}

TEST_CASE("numerical_rank") {
  std::vector<std::complex<double>> m = {1, 2, 2, 4};
  CHECK(numerical_rank(m, 2, 2) == 1);
  m = {1, 0, 0, {0, 1}};
  CHECK(numerical_rank(m, 2, 2) == 2);
  m = {0, 0, 0, 0};
  CHECK(numerical_rank(m, 2, 2) == 0);
}

TEST_CASE("booleanize_lowrank_fp") {
  CHECK(boolean_lift_rank_bound(3, 1) == 3);
  CHECK(boolean_lift_rank_bound(5, 2) == 15);
  CHECK(boolean_lift_rank_bound(3, 0) == 1);

  std::mt19937_64 rng(22);
  for (int p : {3, 5, 7})
    for (std::size_t r : {1U, 2U, 3U}) {
      const auto l = testsupport::random_lowrank(r, 5, p, rng);
      const auto b = booleanize_lowrank_fp(l);
      CHECK(b.rank_bound() == boolean_lift_rank_bound(p, r));
      const auto m = b.materialize();
      CHECK(fp_rank(m) <= boolean_lift_rank_bound(p, r));
      CHECK(m == sign_to_fp(booleanize(l.materialize()), p));
    }

  // An already +-1 valued matrix is a fixed point.
  FpMatrix pm(3, 3, 5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) pm.set(i, j, (i + j) % 2 ? 4 : 1);
  CHECK(booleanize_lowrank_fp(LowRankFp::from_matrix(pm)).materialize() == pm);

  CHECK_THROWS_WITH_AS(booleanize_lowrank_fp(testsupport::random_lowrank(1, 3, 2, rng)),
                       doctest::Contains("degenerate modulus"), DomainError);
  CHECK_THROWS_AS(booleanize_lowrank_fp(testsupport::random_lowrank(4, 3, 5, rng), 10), CapExceeded);
}
