#include "rigidlab/amplify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rigidlab/errors.hpp"
#include "rigidlab/rng.hpp"

namespace rigidlab {

namespace {

Rational rpow(const Rational& base, int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

BigInt binom(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational ratio(std::uint64_t num, std::uint64_t den) {
  Rational q{BigInt(std::to_string(num)), BigInt(std::to_string(den))};
  q.canonicalize();
  return q;
}

double ipow_double(std::size_t base, int exp) { return std::pow(static_cast<double>(base), exp); }

std::size_t ipow_checked(std::size_t base, int exp, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / base) throw CapExceeded(std::string(what) + " too large; use implicit evaluation");
    out *= base;
  }
  return out;
}

void require_probability(const Rational& x, const char* name) {
  if (x < 0 || x > 1) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

// ---------------------------------------------------------------- Kronecker

FpScalar pi_tilde_eval(std::span<const int> a, std::span<const int> z, int p) {
  require_supported_prime(p);
  if (a.size() != z.size()) throw DomainError("pi_tilde_eval: seed and argument lengths differ");
  FpScalar acc(1, p);
  for (std::size_t i = 0; i < a.size(); ++i) acc = acc + FpScalar(a[i], p) * (FpScalar(z[i], p) - FpScalar(1, p));
  return acc;
}

Rational seed_success_closed_form(std::span<const int> z, int p) {
  require_supported_prime(p);
  const bool all_one = std::all_of(z.begin(), z.end(), [p](int v) { return FpScalar(v, p).value() == 1; });
  return all_one ? Rational(1) : frac(1, p);
}

Rational seed_success_prob(std::span<const int> z, int p) {
  require_supported_prime(p);
  const double seeds = ipow_double(static_cast<std::size_t>(p), static_cast<int>(z.size()));
  if (seeds > static_cast<double>(kSeedEnumerationCap)) return seed_success_closed_form(z, p);
  std::vector<int> a(z.size(), 0);
  std::uint64_t hits = 0, total = 0;
  while (true) {
    hits += pi_tilde_eval(a, z, p).value() == 1;
    ++total;
    std::size_t i = a.size();
    while (i > 0 && ++a[i - 1] == p) a[--i] = 0;
    if (i == 0) break;
  }
  return ratio(hits, total);
}

EntryMarginals entry_marginals(const SignMatrix& a, const FpMatrix& l) {
  if (a.rows() != l.rows() || a.cols() != l.cols()) throw DomainError("entry_marginals: shape mismatch");
  std::uint64_t plus = 0, minus = 0, plus_err = 0, minus_err = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const bool err = a(i, j) != bool_of_residue(l(i, j));
      if (a.negative(i, j)) {
        ++minus;
        minus_err += err;
      } else {
        ++plus;
        plus_err += err;
      }
    }
  const std::uint64_t total = plus + minus;
  if (total == 0) throw DomainError("entry_marginals: empty matrix");
  EntryMarginals m;
  m.p1 = ratio(plus, total);
  m.pm1 = ratio(minus, total);
  m.d1 = plus ? ratio(plus_err, plus) : Rational(0);
  m.dm1 = minus ? ratio(minus_err, minus) : Rational(0);
  m.alpha = abs(m.p1 - m.pm1);
  m.delta = ratio(plus_err + minus_err, total);
  return m;
}

Rational kron_error_expected(int p, const Rational& p1, const Rational& pm1, const Rational& d1, const Rational& dm1,
                             int n) {
  require_supported_prime(p);
  if (n < 0) throw DomainError("kron_error_expected: negative power");
  require_probability(p1, "p1");
  require_probability(pm1, "p-1");
  require_probability(d1, "delta_1");
  require_probability(dm1, "delta_-1");
  if (p1 + pm1 != 1) throw DomainError("kron_error_expected: invalid distribution, p1 + p-1 != 1");
  const Rational pr(p);
  return Rational(1, 2) - frac(2 - p, 2L * p) * rpow(p1 - pm1, n) -
         (pr - 1) / pr * rpow(p1 * (1 - d1) - pm1 * dm1, n);
}

Rational kron_theorem_bound(const Rational& alpha, const Rational& delta, int n) {
  require_probability(alpha, "alpha");
  require_probability(delta, "delta");
  if (2 * alpha + delta >= Rational(1, 2))
    throw DomainError("amplification precondition 2*alpha + delta < 1/2 violated (alpha = " + to_string(alpha) +
                      ", delta = " + to_string(delta) + ")");
  return Rational(1, 2) - Rational(1, 2) * rpow(Rational(1, 2) - alpha - delta, n);
}

KronApproximant::KronApproximant(LowRankFp base, std::vector<int> seed, int n)
    : base_(std::move(base)), seed_(std::move(seed)), n_(n), q_(base_.size()) {
  if (n < 0) throw DomainError("KronApproximant: negative power");
  if (seed_.size() != static_cast<std::size_t>(n)) throw DomainError("KronApproximant: seed length must equal n");
  if (base_.V.cols() != q_) throw DomainError("KronApproximant: base must be square");
  for (auto& a : seed_) a = FpScalar(a, modulus()).value();
  const FpMatrix m = base_.materialize();
  dense_.assign(m.entries().begin(), m.entries().end());
}

int KronApproximant::evaluate_digits(std::span<const std::size_t> x, std::span<const std::size_t> y) const {
  if (x.size() != seed_.size() || y.size() != seed_.size()) throw DomainError("evaluate: wrong digit count");
  const int p = modulus();
  int acc = 1;
  for (std::size_t i = 0; i < seed_.size(); ++i) acc = (acc + seed_[i] * (base_entry(x[i], y[i]) + p - 1)) % p;
  return acc;
}

int KronApproximant::evaluate(std::size_t x, std::size_t y) const {
  std::vector<std::size_t> dx(seed_.size()), dy(seed_.size());
  for (std::size_t i = seed_.size(); i-- > 0;) {
    dx[i] = x % q_;
    dy[i] = y % q_;
    x /= q_;
    y /= q_;
  }
  return evaluate_digits(dx, dy);
}

LowRankFp KronApproximant::decomposition(std::size_t cap) const {
  const int p = modulus();
  const std::size_t dim = ipow_checked(q_, n_, cap, "Kronecker approximant");
  const std::size_t r = base_.rank_bound();
  const std::size_t rows = static_cast<std::size_t>(n_) * r + 1;
  if (dim != 0 && rows > cap / dim) throw CapExceeded("Kronecker approximant decomposition too large");
  FpMatrix u(rows, dim, p), v(rows, dim, p);
  int seed_sum = 0;
  for (int a : seed_) seed_sum = (seed_sum + a) % p;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n_));
  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t rest = x;
    for (std::size_t i = digits.size(); i-- > 0;) {
      digits[i] = rest % q_;
      rest /= q_;
    }
    u.set(0, x, 1 - seed_sum);
    v.set(0, x, 1);
    for (std::size_t i = 0; i < digits.size(); ++i)
      for (std::size_t k = 0; k < r; ++k) {
        u.set(1 + i * r + k, x, static_cast<std::int64_t>(seed_[i]) * base_.U(k, digits[i]));
        v.set(1 + i * r + k, x, base_.V(k, digits[i]));
      }
  }
  return LowRankFp(std::move(u), std::move(v));
}

FpMatrix KronApproximant::materialize(std::size_t cap) const {
  const std::size_t dim = ipow_checked(q_, n_, cap, "Kronecker approximant");
  if (dim != 0 && dim > cap / dim) throw CapExceeded("Kronecker approximant too large; use implicit evaluation");
  FpMatrix m(dim, dim, modulus());
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) m.set(x, y, evaluate(x, y));
  return m;
}

KronApproximant build_kron_approximant(const LowRankFp& l, std::vector<int> seed, int n) {
  return KronApproximant(l, std::move(seed), n);
}

ErrorEstimate kron_error_exact(const SignMatrix& a, const KronApproximant& approx, const ErrorOptions& options) {
  const std::size_t q = approx.q();
  if (a.rows() != q || a.cols() != q) throw DomainError("kron_error_exact: base sign matrix must be q x q");
  const int p = approx.modulus();
  const int n = approx.power();
  const auto& seed = approx.seed();
  // Per coordinate pair t = x_i q + y_i: the residue L - 1 and the sign of A.
  const std::size_t pairs = q * q;
  std::vector<int> shift(pairs);
  std::vector<bool> negative(pairs);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) {
      shift[x * q + y] = (approx.base_entry(x, y) + p - 1) % p;
      negative[x * q + y] = a.negative(x, y);
    }
  auto mismatch = [&](int sum, bool parity) { return ((1 + sum) % p == 1) == parity; };

  const double entries = ipow_double(pairs, n);
  if (entries <= options.exhaustive_cap) {
    std::uint64_t errors = 0, total = 0;
    // Depth-first over coordinates with running residue and sign parity.
    auto walk = [&](auto&& self, int i, int sum, bool parity) -> void {
      if (i == n) {
        errors += mismatch(sum, parity);
        ++total;
        return;
      }
      const int ai = seed[static_cast<std::size_t>(i)];
      for (std::size_t t = 0; t < pairs; ++t) self(self, i + 1, (sum + ai * shift[t]) % p, parity != negative[t]);
    };
    walk(walk, 0, 0, false);
    return {ratio(errors, total), true, total, options.rng_seed};
  }

  if (options.samples == 0) throw ConfigError("kron_error_exact: sampling requires a positive sample count");
  SplitMix64 rng(options.rng_seed);
  std::uint64_t errors = 0;
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    int sum = 0;
    bool parity = false;
    for (int i = 0; i < n; ++i) {
      const auto t = static_cast<std::size_t>(rng.below(pairs));
      sum = (sum + seed[static_cast<std::size_t>(i)] * shift[t]) % p;
      parity = parity != negative[t];
    }
    errors += mismatch(sum, parity);
  }
  return {ratio(errors, options.samples), false, options.samples, options.rng_seed};
}

SeedSearchResult best_seed_search(const SignMatrix& a, const LowRankFp& l, int n, const SeedSearchOptions& options) {
  const int p = l.modulus();
  if (n < 0) throw DomainError("best_seed_search: negative power");
  SeedSearchResult result{{}, {Rational(2), false, 0, 0}, Rational(0), 0, options.mode == SeedSearchMode::Exhaustive};
  Rational sum = 0;
  auto consider = [&](const std::vector<int>& seed) {
    const ErrorEstimate e = kron_error_exact(a, KronApproximant(l, seed, n), options.error);
    sum += e.error;
    ++result.seeds_tried;
    if (e.error < result.best.error || (e.error == result.best.error && seed < result.seed)) {
      result.best = e;
      result.seed = seed;
    }
  };

  std::vector<int> seed(static_cast<std::size_t>(n), 0);
  if (options.mode == SeedSearchMode::Exhaustive) {
    if (ipow_double(static_cast<std::size_t>(p), n) > static_cast<double>(kSeedEnumerationCap))
      throw CapExceeded("exhaustive seed search needs p^n <= " + std::to_string(kSeedEnumerationCap));
    while (true) {
      consider(seed);
      std::size_t i = seed.size();
      while (i > 0 && ++seed[i - 1] == p) seed[--i] = 0;
      if (i == 0) break;
    }
  } else {
    if (options.seed_samples == 0) throw ConfigError("best_seed_search: sampled mode needs a positive seed count");
    SplitMix64 rng(options.rng_seed);
    for (std::uint64_t s = 0; s < options.seed_samples; ++s) {
      for (auto& v : seed) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
      consider(seed);
    }
  }
  result.mean = sum / Rational(static_cast<long>(result.seeds_tried));
  result.mean.canonicalize();
  return result;
}

// ----------------------------------------------------------------- Majority

PrefixApproximant::PrefixApproximant(FpMatrix base, std::size_t q, int k, int n)
    : base_(std::move(base)), q_(q), k_(k), n_(n) {
  if (q < 1) throw DomainError("PrefixApproximant: q must be positive");
  if (k < 0 || k > n) throw DomainError("PrefixApproximant: prefix length k must satisfy 0 <= k <= n");
  const std::size_t side = ipow_checked(q, k, kDefaultMaterializationCap, "prefix base");
  if (base_.rows() != side || base_.cols() != side) throw DomainError("PrefixApproximant: base must be q^k x q^k");
  suffix_ = 1;
  for (int i = k; i < n; ++i) {
    if (suffix_ > std::numeric_limits<std::size_t>::max() / q) throw CapExceeded("PrefixApproximant: q^n overflows");
    suffix_ *= q;
  }
}

int PrefixApproximant::evaluate(std::size_t x, std::size_t y) const { return base_(x / suffix_, y / suffix_); }

FpMatrix PrefixApproximant::materialize(std::size_t cap) const {
  const std::size_t dim = ipow_checked(q_, n_, cap, "prefix approximant");
  if (dim != 0 && dim > cap / dim) throw CapExceeded("prefix approximant too large; use implicit evaluation");
  FpMatrix m(dim, dim, base_.modulus());
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) m.set(x, y, evaluate(x, y));
  return m;
}

PrefixApproximant build_prefix_approximant(const FpMatrix& l, std::size_t q, int k, int n) {
  return PrefixApproximant(l, q, k, n);
}

Rational majority_agreement_prob(int k, int n) {
  if (k < 1 || k > n || n > kMaxMajorityLength)
    throw DomainError("majority_agreement_prob: need 1 <= k <= n <= " + std::to_string(kMaxMajorityLength));
  BigInt agree = 0;
  for (int a = 0; a <= k; ++a) {
    const int x = 2 * a - k;
    const BigInt ca = binom(static_cast<unsigned long>(k), static_cast<unsigned long>(a));
    for (int b = 0; b <= n - k; ++b) {
      const int y = 2 * b - (n - k);
      if ((x >= 0) == (x + y >= 0))
        agree += ca * binom(static_cast<unsigned long>(n - k), static_cast<unsigned long>(b));
    }
  }
  Rational out(agree, BigInt(1) << n);
  out.canonicalize();
  return out;
}

Rational binomial_tail(int n, int a) {
  if (n < 0 || a < -n || a > n) throw DomainError("binomial_tail: need |a| <= n");
  BigInt count = 0;
  for (int m = 0; m <= n; ++m)
    if (2 * m - n >= a) count += binom(static_cast<unsigned long>(n), static_cast<unsigned long>(m));
  Rational out(count, BigInt(1) << n);
  out.canonicalize();
  return out;
}

Rational maj_amplified_error(int k, int n, const Rational& delta) {
  if (delta < 0 || delta > Rational(1, 2)) throw DomainError("maj_amplified_error: delta must lie in [0, 1/2]");
  const Rational p = majority_agreement_prob(k, n);
  return (1 - p) + (2 * p - 1) * delta;
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("Ensemble: no members");
  Rational total = 0;
  for (const auto& m : members_) {
    if (m.weight <= 0) throw DomainError("Ensemble: weights must be positive");
    if (m.matrix.rows() != rows() || m.matrix.cols() != cols() || m.matrix.modulus() != modulus())
      throw DomainError("Ensemble: members must share shape and modulus");
    total += m.weight;
  }
  if (total != 1) throw DomainError("Ensemble: weights must sum to 1");
}

EnsembleError ensemble_max_error(const Ensemble& e, const SignMatrix& target) {
  if (target.rows() != e.rows() || target.cols() != e.cols()) throw DomainError("ensemble_max_error: shape mismatch");
  EnsembleError out{Rational(0), 0};
  for (const auto& m : e.members()) out.max_rank = std::max(out.max_rank, fp_rank(m.matrix));
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = 0; j < e.cols(); ++j) {
      Rational err = 0;
      for (const auto& m : e.members())
        if (bool_of_residue(m.matrix(i, j)) != target(i, j)) err += m.weight;
      if (err > out.max_error) out.max_error = err;
    }
  return out;
}

Ensemble flip_noise_ensemble(const FpMatrix& exact, double delta, std::size_t samples, std::uint64_t rng_seed) {
  if (delta < 0.0 || delta > 1.0) throw DomainError("flip_noise_ensemble: delta must lie in [0, 1]");
  if (samples == 0) throw DomainError("flip_noise_ensemble: need at least one sample");
  SplitMix64 rng(rng_seed);
  std::vector<EnsembleMember> members;
  members.reserve(samples);
  const Rational weight = frac(1, static_cast<long>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    FpMatrix m = exact;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (rng.uniform() < delta) m.set(i, j, m(i, j) == 1 ? 0 : 1);
    members.push_back({weight, std::move(m)});
  }
  return Ensemble(std::move(members));
}

}  // namespace rigidlab
