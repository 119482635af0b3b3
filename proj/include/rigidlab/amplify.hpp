#pragma once
// Rigidity amplification under Kronecker and Majority powers.
//
// Kronecker: given L close to a q x q sign matrix A, the matrix
//   Lt[x, y] = 1 + sum_i a_i (L[x_i, y_i] - 1)  (mod p)
// has rank <= n r + 1 and, for a good seed a, approximates A^{(x)n}.
// Majority: Lt[x, y] = L[x_pre, y_pre] reads only the length-k prefixes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rigidlab/field.hpp"
#include "rigidlab/matrix.hpp"

namespace rigidlab {

// ---------------------------------------------------------------- Kronecker

/// 1 + sum a_i (z_i - 1) mod p.
FpScalar pi_tilde_eval(std::span<const int> a, std::span<const int> z, int p);

inline constexpr std::uint64_t kSeedEnumerationCap = 1'000'000;

/// Pr over uniform a in F_p^n that bool(pi_tilde_a(z)) = +1: 1 when every
/// z_i = 1, else 1/p. Enumerates seeds when p^n <= kSeedEnumerationCap.
Rational seed_success_prob(std::span<const int> z, int p);
Rational seed_success_closed_form(std::span<const int> z, int p);

/// Per-coordinate statistics of a base pair (A, L) under a uniform entry:
/// p1 = Pr[A = 1], d1 = Pr[bool(L) != A | A = 1], and so on.
struct EntryMarginals {
  Rational p1, pm1, d1, dm1;
  Rational alpha;  // |p1 - pm1|
  Rational delta;  // Pr[bool(L) != A]
};

EntryMarginals entry_marginals(const SignMatrix& a, const FpMatrix& l);

/// Exact error probability of the degree-1 approximation with a uniform seed:
///   1/2 - (2-p)/(2p) (p1 - pm1)^n - (p-1)/p (p1 (1 - d1) - pm1 dm1)^n.
Rational kron_error_expected(int p, const Rational& p1, const Rational& pm1, const Rational& d1, const Rational& dm1,
                             int n);

/// 1/2 - (1/2)(1/2 - alpha - delta)^n. Throws DomainError unless 2 alpha + delta < 1/2.
Rational kron_theorem_bound(const Rational& alpha, const Rational& delta, int n);

class KronApproximant {
 public:
  KronApproximant(LowRankFp base, std::vector<int> seed, int n);

  int modulus() const { return base_.modulus(); }
  std::size_t q() const { return q_; }
  int power() const { return n_; }
  const std::vector<int>& seed() const { return seed_; }
  const LowRankFp& base() const { return base_; }
  /// Residue of the base matrix at (i, j), i, j < q.
  int base_entry(std::size_t i, std::size_t j) const { return dense_[i * q_ + j]; }

  /// Entry at big-endian digit indices x, y in [q^n).
  int evaluate(std::size_t x, std::size_t y) const;
  int evaluate_digits(std::span<const std::size_t> x, std::span<const std::size_t> y) const;

  /// Explicit decomposition with n r + 1 rows.
  LowRankFp decomposition(std::size_t cap = kDefaultMaterializationCap) const;
  FpMatrix materialize(std::size_t cap = kDefaultMaterializationCap) const;

 private:
  LowRankFp base_;
  std::vector<int> seed_;
  int n_;
  std::size_t q_;
  std::vector<int> dense_;
};

KronApproximant build_kron_approximant(const LowRankFp& l, std::vector<int> seed, int n);

inline constexpr double kExhaustiveEntryCap = 1e8;

struct ErrorOptions {
  double exhaustive_cap = kExhaustiveEntryCap;  // q^{2n} at or below this is counted exactly
  std::uint64_t samples = 1'000'000;
  std::uint64_t rng_seed = 0;
};

struct ErrorEstimate {
  Rational error;  // disagreements / entries (exact) or / samples (sampled)
  bool exhaustive;
  std::uint64_t samples;  // entries examined
  std::uint64_t rng_seed;
};

/// Fraction of entries with bool(Lt[x,y]) != A^{(x)n}[x,y].
ErrorEstimate kron_error_exact(const SignMatrix& a, const KronApproximant& approx, const ErrorOptions& options = {});

enum class SeedSearchMode { Exhaustive, Sampled };

struct SeedSearchOptions {
  SeedSearchMode mode = SeedSearchMode::Exhaustive;
  std::uint64_t seed_samples = 1000;  // sampled mode only
  std::uint64_t rng_seed = 0;
  ErrorOptions error;
};

struct SeedSearchResult {
  std::vector<int> seed;
  ErrorEstimate best;
  Rational mean;  // average error over the seeds tried
  std::uint64_t seeds_tried;
  bool exhaustive;
};

/// Seed minimizing kron_error_exact; ties go to the lexicographically
/// smallest seed. Exhaustive mode requires p^n <= kSeedEnumerationCap.
SeedSearchResult best_seed_search(const SignMatrix& a, const LowRankFp& l, int n, const SeedSearchOptions& options = {});

// ----------------------------------------------------------------- Majority

class PrefixApproximant {
 public:
  /// base is q^k x q^k.
  PrefixApproximant(FpMatrix base, std::size_t q, int k, int n);

  const FpMatrix& base() const { return base_; }
  int prefix_length() const { return k_; }
  int power() const { return n_; }
  std::size_t q() const { return q_; }
  int evaluate(std::size_t x, std::size_t y) const;
  FpMatrix materialize(std::size_t cap = kDefaultMaterializationCap) const;

 private:
  FpMatrix base_;
  std::size_t q_;
  int k_, n_;
  std::size_t suffix_;  // q^{n-k}
};

PrefixApproximant build_prefix_approximant(const FpMatrix& l, std::size_t q, int k, int n);

inline constexpr int kMaxMajorityLength = 64;

/// Pr[Maj(A_1..A_k) = Maj(A_1..A_n)] for uniform independent signs, ties to +1.
Rational majority_agreement_prob(int k, int n);

/// Pr[X_1 + ... + X_n >= a] for uniform independent signs.
Rational binomial_tail(int n, int a);

/// (1 - p) + (2p - 1) delta with p = majority_agreement_prob(k, n).
Rational maj_amplified_error(int k, int n, const Rational& delta);

struct EnsembleMember {
  Rational weight;
  FpMatrix matrix;
};

/// A distribution over matrices of one shape and modulus.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t rows() const { return members_.front().matrix.rows(); }
  std::size_t cols() const { return members_.front().matrix.cols(); }
  int modulus() const { return members_.front().matrix.modulus(); }

 private:
  std::vector<EnsembleMember> members_;
};

struct EnsembleError {
  Rational max_error;
  std::size_t max_rank;
};

/// Max over entries of the weighted probability that bool(member) != target.
EnsembleError ensemble_max_error(const Ensemble& e, const SignMatrix& target);

/// Uniform ensemble of `samples` copies of `exact` with each entry's Boolean
/// value flipped independently with probability delta (a flipped residue 1
/// becomes 0, anything else becomes 1).
Ensemble flip_noise_ensemble(const FpMatrix& exact, double delta, std::size_t samples, std::uint64_t rng_seed);

}  // namespace rigidlab
