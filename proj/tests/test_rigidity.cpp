#include <doctest.h>

#include <random>

#include "rigidlab/errors.hpp"
#include "rigidlab/rigidity.hpp"
#include "support.hpp"

using namespace rigidlab;

namespace {

void check_witness(const RigidityResult& res, const SignMatrix& a) {
  const auto l = res.witness.materialize();
  CHECK(boolean_distance(a, l) == res.value);
  CHECK(fp_rank(l) <= res.rank);
}

void check_witness(const RigidityResult& res, const FpMatrix& a) {
  const auto l = res.witness.materialize();
  CHECK(hamming_distance(a, l) == res.value);
  CHECK(fp_rank(l) <= res.rank);
}

}  // namespace

TEST_CASE("exact_boolean_rigidity examples") {
  const auto h = exact_boolean_rigidity(h1(), 1, 3);
  CHECK(h.value == 1);
  CHECK(h.exhaustive);
  check_witness(h, h1());
  CHECK(bruteforce_oracle(h1(), 1, 3) == 1);

  std::mt19937_64 rng(40);
  for (int t = 0; t < 10; ++t) {
    const auto a = testsupport::random_sign(4, 4, rng);
    CHECK(exact_boolean_rigidity(a, 4, 3).value == 0);
    CHECK(exact_boolean_rigidity(a, 0, 3).value == a.count_positive());
    CHECK(exact_boolean_rigidity(a, 5, 2).value == 0);
    check_witness(exact_boolean_rigidity(a, 4, 2), a);
  }
}

TEST_CASE("oracle equivalence") {
  for (int p : {2, 3}) {
    for (const auto& a : testsupport::all_sign_matrices(2, 2)) {
      const auto res = exact_boolean_rigidity(a, 1, p);
      CHECK(res.value == bruteforce_oracle(a, 1, p));
      check_witness(res, a);
      const auto fp = sign_to_fp(a, p);
      CHECK(exact_regular_rigidity(fp, 1).value == bruteforce_oracle(fp, 1));
    }
    std::mt19937_64 rng(41 + static_cast<unsigned>(p));
    for (int t = 0; t < 20; ++t) {
      const auto a = testsupport::random_sign(3, 3, rng);
      CHECK(exact_boolean_rigidity(a, 1, p).value == bruteforce_oracle(a, 1, p));
      const auto m = testsupport::random_fp(3, 3, p, rng);
      const auto reg = exact_regular_rigidity(m, 1);
      CHECK(reg.value == bruteforce_oracle(m, 1));
      check_witness(reg, m);
    }
  }
}

TEST_CASE("exact_regular_rigidity examples") {
  for (std::size_t n = 2; n <= 5; ++n) CHECK(exact_regular_rigidity(FpMatrix::identity(n, 3), n - 1).value == 1);
  std::mt19937_64 rng(42);
  const auto l = testsupport::random_lowrank(2, 5, 3, rng).materialize();
  CHECK(exact_regular_rigidity(l, 2).value == 0);
}

TEST_CASE("solver properties") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    const auto a = testsupport::random_sign(5, 5, rng);
    for (int p : {2, 3}) {
      std::size_t prev = a.count_positive();
      for (std::size_t r = 0; r <= 2; ++r) {
        const auto b = exact_boolean_rigidity(a, r, p);
        check_witness(b, a);
        CHECK(b.value <= prev);
        prev = b.value;
        if (p == 3) {
          const auto fp = sign_to_fp(a, p);
          const auto reg = exact_regular_rigidity(fp, r);
          check_witness(reg, fp);
          CHECK(b.value <= reg.value);
        }
      }
    }
  }
}

TEST_CASE("deterministic witnesses across thread counts") {
  std::mt19937_64 rng(44);
  const auto a = testsupport::random_sign(6, 6, rng);
  const auto one = exact_boolean_rigidity(a, 2, 3, {kDefaultWorkBudget, 1});
  const auto four = exact_boolean_rigidity(a, 2, 3, {kDefaultWorkBudget, 4});
  CHECK(one.value == four.value);
  CHECK(one.witness.U == four.witness.U);
  CHECK(one.witness.V == four.witness.V);
}

TEST_CASE("budgets") {
  std::mt19937_64 rng(45);
  const auto a = testsupport::random_sign(8, 8, rng);
  CHECK_THROWS_WITH_AS(exact_boolean_rigidity(a, 2, 3, {1e3, 0}), doctest::Contains("budget"), CapExceeded);
  CHECK_THROWS_AS(bruteforce_oracle(a, 1, 3, 1e6), CapExceeded);
}

TEST_CASE("rank1_search") {
  for (int p : {2, 3})
    for (const auto& a : testsupport::all_sign_matrices(2, 2)) {
      const auto res = rank1_search(a, p);
      CHECK(res.exhaustive);
      CHECK(res.value == exact_boolean_rigidity(a, 1, p).value);
      check_witness(res, a);
    }
  std::mt19937_64 rng(46);
  for (int t = 0; t < 10; ++t) {
    const auto a = testsupport::random_sign(5, 6, rng);
    const auto res = rank1_search(a, 3);
    CHECK(res.value <= trivial_rank1_bound(a));
    CHECK(res.value == exact_boolean_rigidity(a, 1, 3).value);
    check_witness(res, a);
  }
  const auto truncated = rank1_search(walsh_hadamard(3), 3, 100);
  CHECK_FALSE(truncated.exhaustive);
  CHECK(truncated.value <= trivial_rank1_bound(walsh_hadamard(3)));
}

TEST_CASE("trivial_rank1_bound") {
  CHECK(trivial_rank1_bound(h1()) == 1);
  CHECK(trivial_rank1_bound(walsh_hadamard(3)) == 28);
  CHECK(trivial_rank1_bound(testsupport::signs(2, 2, {1, -1, -1, 1})) == 2);
}
