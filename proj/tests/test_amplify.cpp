#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rigidlab/amplify.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace rigidlab;

namespace {

using testsupport::q;

// Exact disagreement count of the Kronecker approximant by dynamic
// programming over (residue, parity) states.
Rational dp_error(const SignMatrix& a, const FpMatrix& l, const std::vector<int>& seed) {
  const int p = l.modulus();
  const std::size_t qd = a.rows();
  std::vector<double> ways(static_cast<std::size_t>(2 * p), 0.0);
  ways[0] = 1.0;  // residue 0, parity even
  for (int s : seed) {
    std::vector<double> next(ways.size(), 0.0);
    for (int res = 0; res < p; ++res)
      for (int par = 0; par < 2; ++par) {
        const double w = ways[static_cast<std::size_t>(2 * res + par)];
        if (w == 0) continue;
        for (std::size_t x = 0; x < qd; ++x)
          for (std::size_t y = 0; y < qd; ++y) {
            const int r2 = (res + s * ((l(x, y) + p - 1) % p)) % p;
            const int p2 = par ^ static_cast<int>(a.negative(x, y));
            next[static_cast<std::size_t>(2 * r2 + p2)] += w;
          }
      }
    ways = next;
  }
  double errors = 0, total = 0;
  for (int res = 0; res < p; ++res)
    for (int par = 0; par < 2; ++par) {
      const double w = ways[static_cast<std::size_t>(2 * res + par)];
      total += w;
      if (((1 + res) % p == 1) == (par == 1)) errors += w;
    }
  return q(static_cast<long>(errors), static_cast<long>(total));
}

}  // namespace

TEST_CASE("pi_tilde_eval") {
  const std::vector<int> ones = {1, 1, 1};
  std::mt19937_64 rng(50);
  for (int t = 0; t < 10; ++t) {
    const std::vector<int> a = {static_cast<int>(rng() % 5), static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)};
    CHECK(pi_tilde_eval(a, ones, 5).value() == 1);
    const std::vector<int> z = {static_cast<int>(rng() % 5), static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)};
    CHECK(pi_tilde_eval(std::vector<int>{0, 0, 0}, z, 5).value() == 1);
  }
  const std::vector<int> a1 = {1}, z2 = {2};
  CHECK(pi_tilde_eval(a1, z2, 3).value() == 2);
  CHECK(bool_of_residue(pi_tilde_eval(a1, z2, 3).value()) == -1);
  CHECK_THROWS_AS(pi_tilde_eval(a1, ones, 3), DomainError);
}

TEST_CASE("seed_success_prob") {
  CHECK(seed_success_prob(std::vector<int>{1, 1, 1}, 3) == 1);
  CHECK(seed_success_prob(std::vector<int>{2, 1}, 3) == q(1, 3));
  for (int p : {2, 3, 5})
    for (int z1 = 0; z1 < p; ++z1)
      for (int z2 = 0; z2 < p; ++z2) {
        const std::vector<int> z = {z1, z2};
        CHECK(seed_success_prob(z, p) == seed_success_closed_form(z, p));
      }
  const std::vector<int> long_z(20, 1);
  CHECK(seed_success_prob(long_z, 3) == 1);
}

TEST_CASE("kron_error_expected") {
  CHECK(kron_error_expected(3, q(1, 2), q(1, 2), 0, 0, 1) == q(1, 6));
  const std::vector<Rational> grid = {0, q(1, 4), q(1, 3), q(1, 2), q(3, 4)};
  for (int p : {2, 3, 5})
    for (int n = 1; n <= 3; ++n)
      for (const auto& p1 : grid)
        for (const auto& d : grid) {
          const Rational pm1 = 1 - p1;
          CHECK(kron_error_expected(p, p1, pm1, d, q(1, 5), n) == testsupport::enumerate_kron_error(p, p1, pm1, d, q(1, 5), n));
        }
  // Balanced signs with d1 = 1 - dm1 zero both powers.
  for (int p : {2, 3, 5})
    for (int n = 1; n <= 4; ++n) CHECK(kron_error_expected(p, q(1, 2), q(1, 2), q(2, 3), q(1, 3), n) == q(1, 2));
  CHECK_THROWS_AS(kron_error_expected(3, q(1, 2), q(1, 3), 0, 0, 1), DomainError);

  // Monte Carlo over (A_i, L_i, a) at p = 3, n = 4, delta = 0.1.
  SplitMix64 rng(7);
  const int p = 3, n = 4;
  const double p1 = 0.6, delta = 0.1;
  const std::uint64_t samples = 1'000'000;
  std::uint64_t errors = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    int v = 1, parity = 1;
    for (int i = 0; i < n; ++i) {
      const int ai = rng.uniform() < p1 ? 1 : -1;
      const int li = rng.uniform() < delta ? -ai : ai;
      const int seed = static_cast<int>(rng.below(p));
      parity *= ai;
      v += seed * ((li == 1 ? 1 : 0) - 1);
    }
    errors += bool_of_residue(((v % p) + p) % p) != parity;
  }
  const double measured = static_cast<double>(errors) / samples;
  const double expected = kron_error_expected(p, q(3, 5), q(2, 5), q(1, 10), q(1, 10), n).get_d();
  const double se = std::sqrt(expected * (1 - expected) / samples);
  CHECK(std::abs(measured - expected) <= 3 * se);
}

TEST_CASE("kron_theorem_bound") {
  CHECK(kron_theorem_bound(q(1, 8), 0, 2) == q(55, 128));
  CHECK_THROWS_WITH_AS(kron_theorem_bound(q(1, 4), 0, 2), doctest::Contains("2*alpha + delta"), DomainError);
  CHECK_THROWS_AS(kron_theorem_bound(q(1, 2), 0, 2), DomainError);
}

TEST_CASE("entry_marginals") {
  const auto h3 = walsh_hadamard(3);
  const auto m = entry_marginals(h3, sign_to_fp(h3, 3));
  CHECK(m.p1 == q(36, 64));
  CHECK(m.pm1 == q(28, 64));
  CHECK(m.alpha == q(1, 8));
  CHECK(m.delta == 0);
  const auto z = entry_marginals(h1(), FpMatrix(2, 2, 3));
  CHECK(z.d1 == 1);
  CHECK(z.dm1 == 0);
  CHECK(z.delta == q(3, 4));
}

TEST_CASE("KronApproximant") {
  std::mt19937_64 rng(51);
  const auto base = testsupport::random_lowrank(1, 2, 3, rng);
  const KronApproximant k(base, {1, 2}, 2);
  const auto m = k.materialize();
  const auto lm = base.materialize();
  for (int t = 0; t < 100; ++t) {
    const std::size_t x = rng() % 4, y = rng() % 4;
    const std::vector<int> a = {1, 2};
    const std::vector<int> z = {lm(x / 2, y / 2), lm(x % 2, y % 2)};
    CHECK(k.evaluate(x, y) == pi_tilde_eval(a, z, 3).value());
    CHECK(m(x, y) == k.evaluate(x, y));
  }
  CHECK(fp_rank(m) <= 3);
  CHECK(k.decomposition().materialize() == m);
  CHECK(k.decomposition().rank_bound() == 3);

  const KronApproximant zero(base, {0, 0}, 2);
  CHECK(zero.materialize() == FpMatrix::constant(4, 4, 3, 1));
  CHECK(fp_rank(zero.materialize()) == 1);
  CHECK_THROWS_AS(KronApproximant(base, {1}, 2), DomainError);
}

TEST_CASE("kron_error_exact") {
  // n = 1 with the exact base and a_1 = 1 reproduces H_3 exactly.
  const auto h3 = walsh_hadamard(3);
  const auto l = LowRankFp::from_matrix(sign_to_fp(h3, 3));
  CHECK(kron_error_exact(h3, KronApproximant(l, {1}, 1)).error == 0);
  CHECK(kron_error_exact(h3, KronApproximant(l, {0}, 1)).error == q(28, 64));

  std::mt19937_64 rng(52);
  for (int t = 0; t < 10; ++t) {
    const int p = t % 2 ? 3 : 5;
    const auto a = testsupport::random_sign(3, 3, rng);
    const auto base = testsupport::random_lowrank(2, 3, p, rng);
    std::vector<int> seed(3);
    for (auto& s : seed) s = static_cast<int>(rng() % static_cast<unsigned>(p));
    const auto e = kron_error_exact(a, KronApproximant(base, seed, 3));
    CHECK(e.exhaustive);
    CHECK(e.samples == 729);
    CHECK(e.error == dp_error(a, base.materialize(), seed));

    // Brute force against the explicit Kronecker power.
    const auto ap = kron_power(a, 3);
    const auto lm = KronApproximant(base, seed, 3).materialize();
    CHECK(e.error == q(static_cast<long>(boolean_distance(ap, lm)), 729));
  }

  // Sampling path: flagged, deterministic, close to the exact value.
  const auto base = LowRankFp::from_matrix(sign_to_fp(h1(), 3));
  const KronApproximant k(base, std::vector<int>(12, 1), 12);
  ErrorOptions opts;
  opts.exhaustive_cap = 1e6;
  opts.samples = 200'000;
  opts.rng_seed = 9;
  const auto s1 = kron_error_exact(h1(), k, opts);
  const auto s2 = kron_error_exact(h1(), k, opts);
  CHECK_FALSE(s1.exhaustive);
  CHECK(s1.error == s2.error);
  const double exact = dp_error(h1(), base.materialize(), std::vector<int>(12, 1)).get_d();
  CHECK(std::abs(s1.error.get_d() - exact) < 4 * std::sqrt(exact * (1 - exact) / 200'000) + 1e-12);
}

TEST_CASE("best_seed_search") {
  const auto h3 = walsh_hadamard(3);
  const auto l = LowRankFp::from_matrix(sign_to_fp(h3, 3));
  const auto res = best_seed_search(h3, l, 2);
  CHECK(res.exhaustive);
  CHECK(res.seeds_tried == 9);
  CHECK(res.best.error <= res.mean);
  const auto m = entry_marginals(h3, sign_to_fp(h3, 3));
  CHECK(res.mean == kron_error_expected(3, m.p1, m.pm1, m.d1, m.dm1, 2));
  CHECK(res.best.error <= kron_theorem_bound(m.alpha, m.delta, 2));
  const auto again = best_seed_search(h3, l, 2);
  CHECK(again.seed == res.seed);

  // Mean over all seeds equals the closed form with empirical marginals.
  std::mt19937_64 rng(53);
  for (int t = 0; t < 6; ++t) {
    const int p = t % 2 ? 2 : 3;
    const auto a = testsupport::random_sign(2, 2, rng);
    const auto base = testsupport::random_lowrank(1, 2, p, rng);
    for (int n = 1; n <= 3; ++n) {
      const auto r = best_seed_search(a, base, n);
      const auto mm = entry_marginals(a, base.materialize());
      CHECK(r.mean == kron_error_expected(p, mm.p1, mm.pm1, mm.d1, mm.dm1, n));
      CHECK(r.best.error <= r.mean);
    }
  }

  SeedSearchOptions sampled;
  sampled.mode = SeedSearchMode::Sampled;
  sampled.seed_samples = 5;
  sampled.rng_seed = 3;
  const auto s1 = best_seed_search(h3, l, 2, sampled);
  const auto s2 = best_seed_search(h3, l, 2, sampled);
  CHECK_FALSE(s1.exhaustive);
  CHECK(s1.seed == s2.seed);
  CHECK(s1.seeds_tried == 5);
}

TEST_CASE("PrefixApproximant") {
  const auto m1f = sign_to_fp(m1(), 3);
  const PrefixApproximant pre(m1f, 2, 1, 3);
  const auto mat = pre.materialize();
  CHECK(fp_rank(mat) == fp_rank(m1f));
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) CHECK(pre.evaluate(x, y) == m1f(x >> 2, y >> 2));
  CHECK(boolean_distance(distance_matrix(3), mat) == 16);
  CHECK(q(16, 64) == maj_amplified_error(1, 3, 0));

  const auto m3 = sign_to_fp(distance_matrix(3), 5);
  CHECK(PrefixApproximant(m3, 2, 3, 3).materialize() == m3);
  CHECK_THROWS_AS(PrefixApproximant(m1f, 2, 2, 3), DomainError);
  CHECK_THROWS_AS(PrefixApproximant(m1f, 2, 4, 3), DomainError);
}

TEST_CASE("majority_agreement_prob") {
  CHECK(majority_agreement_prob(1, 3) == q(3, 4));
  for (int n = 1; n <= 12; ++n) {
    CHECK(majority_agreement_prob(n, n) == 1);
    for (int k = 1; k <= n; ++k) {
      long agree = 0;
      for (unsigned mask = 0; mask < (1U << n); ++mask) {
        int sk = 0, sn = 0;
        for (int i = 0; i < n; ++i) {
          const int v = (mask >> i) & 1U ? -1 : 1;
          sn += v;
          if (i < k) sk += v;
        }
        agree += (sk >= 0) == (sn >= 0);
      }
      CHECK(majority_agreement_prob(k, n) == q(agree, 1L << n));
    }
  }
  double c = 1e9;
  for (int k : {1, 2, 4})
    for (int n : {8, 16, 32}) c = std::min(c, (majority_agreement_prob(k, n).get_d() - 0.5) / std::sqrt(double(k) / n));
  CHECK(c > 0);
  CHECK_THROWS_AS(majority_agreement_prob(0, 3), DomainError);
  CHECK_THROWS_AS(majority_agreement_prob(4, 3), DomainError);
}

TEST_CASE("binomial_tail") {
  CHECK(binomial_tail(1, 1) == q(1, 2));
  CHECK(binomial_tail(4, 1) == q(5, 16));
  for (int n = 1; n <= 10; ++n) CHECK(binomial_tail(n, -n) == 1);
  CHECK_THROWS_AS(binomial_tail(3, 4), DomainError);
}

TEST_CASE("maj_amplified_error") {
  for (int n = 1; n <= 9; ++n)
    for (int k = 1; k <= n; ++k) {
      CHECK(maj_amplified_error(k, n, q(1, 2)) == q(1, 2));
      const auto p = majority_agreement_prob(k, n);
      const Rational d = q(1, 7);
      CHECK(maj_amplified_error(k, n, d) <= Rational(1, 2) - (p - Rational(1, 2)) * (1 - 2 * d));
    }
  CHECK(maj_amplified_error(1, 3, 0) == q(1, 4));
  CHECK_THROWS_AS(maj_amplified_error(1, 3, q(3, 4)), DomainError);
}

TEST_CASE("ensembles") {
  const auto target = distance_matrix(2);
  const auto exact = sign_to_fp(target, 3);
  CHECK(ensemble_max_error(Ensemble({{1, exact}}), target).max_error == 0);

  FpMatrix flipped(4, 4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) flipped.set(i, j, exact(i, j) == 1 ? 0 : 1);
  const Rational d = q(1, 5);
  const auto two = ensemble_max_error(Ensemble({{1 - d, exact}, {d, flipped}}), target);
  CHECK(two.max_error == d);

  const auto noisy = flip_noise_ensemble(sign_to_fp(distance_matrix(3), 3), 0.25, 64, 11);
  const auto err = ensemble_max_error(noisy, distance_matrix(3));
  CHECK(err.max_error >= q(1, 10));
  CHECK(err.max_error <= q(45, 100));

  CHECK_THROWS_AS(Ensemble({{q(1, 2), exact}}), DomainError);
  CHECK_THROWS_AS(Ensemble({{1, exact}, {0, exact}}), DomainError);
  CHECK_THROWS_AS(ensemble_max_error(Ensemble({{1, exact}}), distance_matrix(3)), DomainError);
}

TEST_CASE("prefix error under independent flip noise") {
  const int k = 2, n = 5;
  const double delta = 0.2;
  const std::size_t samples = 400;
  const auto base = sign_to_fp(distance_matrix(k), 3);
  const auto target = distance_matrix(n);
  const auto ens = flip_noise_ensemble(base, delta, samples, 17);
  double total = 0;
  for (const auto& m : ens.members())
    total += static_cast<double>(boolean_distance(target, PrefixApproximant(m.matrix, 2, k, n).materialize()));
  const double cells = static_cast<double>(target.rows() * target.cols());
  const double measured = total / (cells * samples);
  const double expected = maj_amplified_error(k, n, q(1, 5)).get_d();
  // Entries sharing a prefix share their noise bit: q^{2k} independent cells per member.
  const double se = std::sqrt(delta * (1 - delta) / (16.0 * samples));
  CHECK(std::abs(measured - expected) <= 3 * se);
}
