#include "rigidlab/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rigidlab/amplify.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/field.hpp"
#include "rigidlab/formulas.hpp"
#include "rigidlab/lift.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/matrix_io.hpp"
#include "rigidlab/rigidity.hpp"
#include "rigidlab/rng.hpp"
#include "rigidlab/spectral.hpp"

#ifndef RIGIDLAB_VERSION
#define RIGIDLAB_VERSION "unknown"
#endif

namespace rigidlab {

using ordered_json = nlohmann::ordered_json;

const char* version() { return RIGIDLAB_VERSION; }

namespace {

constexpr std::uint64_t kDefaultEntrySamples = 1'000'000;
constexpr std::uint64_t kDefaultSeedSamples = 1000;
constexpr std::uint64_t kDefaultLiftInstances = 10;
constexpr std::uint64_t kDefaultEnsembleSize = 1000;
constexpr int kMaxMajPower = 13;  // 4^13 cells
constexpr int kMaxEigsMeasured = 20;

std::string cell_rational(const Rational& q) { return to_string(q); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

// --------------------------------------------------------------- matrices

AnyMatrix named_matrix(const ExperimentConfig& cfg) {
  static const std::regex pattern(R"(^(h|m|ones|random|lowrank)(\d+)$)");
  std::smatch match;
  if (!std::regex_match(cfg.base, match, pattern))
    throw ConfigError("unknown base '" + cfg.base + "' (expected h<k>, m<k>, ones<N>, random<N> or lowrank<N>)");
  const std::string kind = match[1];
  const long size = std::stol(match[2]);
  if (size < 1 || size > 4096) throw ConfigError("base size out of range: " + cfg.base);
  const auto n = static_cast<std::size_t>(size);
  if (kind == "h") {
    if (size > 12) throw ConfigError("h<k> requires k <= 12");
    return walsh_hadamard(static_cast<int>(size));
  }
  if (kind == "m") {
    if (size > 12) throw ConfigError("m<k> requires k <= 12");
    return distance_matrix(static_cast<int>(size));
  }
  if (kind == "ones") return SignMatrix(n, n);
  SplitMix64 rng(cfg.seed);
  if (kind == "random") {
    SignMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.set(i, j, rng.below(2) ? -1 : 1);
    return s;
  }
  FpMatrix u(cfg.rank, n, cfg.p), v(cfg.rank, n, cfg.p);
  for (auto* m : {&u, &v})
    for (std::size_t i = 0; i < cfg.rank; ++i)
      for (std::size_t j = 0; j < n; ++j) m->set(i, j, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cfg.p))));
  return LowRankFp{u, v}.materialize();
}

AnyMatrix load_input(const ExperimentConfig& cfg) {
  if (!cfg.inputs.empty()) return read_matrix_file(cfg.inputs.front());
  if (!cfg.base.empty()) return named_matrix(cfg);
  throw ConfigError(cfg.subcommand + ": an input matrix is required (--in or --base)");
}

SignMatrix as_sign(const AnyMatrix& m) {
  if (const auto* s = std::get_if<SignMatrix>(&m)) return *s;
  return booleanize(std::get<FpMatrix>(m));
}

FpMatrix as_fp(const AnyMatrix& m, int p) {
  if (const auto* f = std::get_if<FpMatrix>(&m)) return *f;
  return sign_to_fp(std::get<SignMatrix>(m), p);
}

LowRankFp random_lowrank(std::size_t r, std::size_t n, int p, SplitMix64& rng) {
  FpMatrix u(r, n, p), v(r, n, p);
  for (auto* m : {&u, &v})
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) m->set(i, j, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p))));
  return {u, v};
}

// A flipped entry changes its Boolean value: residue 1 becomes 0, anything else 1.
FpMatrix flip_entries(const FpMatrix& m, double delta, SplitMix64& rng) {
  FpMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (rng.uniform() < delta) out.set(i, j, m(i, j) == 1 ? 0 : 1);
  return out;
}

Rational rational_from_decimal(double x) {
  Rational q(static_cast<long>(std::llround(x * 1e9)), 1'000'000'000L);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- drivers

void run_gen(const ExperimentConfig& cfg, Artifact& art) {
  const AnyMatrix m = load_input(cfg);
  if (effective_format(cfg) == "mat") {
    art.matrix_text = format_matrix(m);
    return;
  }
  art.columns = {"row", "col", "value"};
  std::visit(
      [&](const auto& mat) {
        for (std::size_t i = 0; i < mat.rows(); ++i)
          for (std::size_t j = 0; j < mat.cols(); ++j)
            art.rows.push_back({std::int64_t(i), std::int64_t(j), std::int64_t(mat(i, j))});
      },
      m);
}

void run_rank(const ExperimentConfig& cfg, Artifact& art) {
  const FpMatrix m = as_fp(load_input(cfg), cfg.p);
  art.columns = {"rows", "cols", "p", "rank"};
  art.rows.push_back({std::int64_t(m.rows()), std::int64_t(m.cols()), std::int64_t(m.modulus()), std::int64_t(fp_rank(m))});
}

Cell spectral_lower_bound(const SignMatrix& a, std::size_t r, int p) {
  if (a.rows() != a.cols() || a.rows() == 0) return std::monostate{};
  const BoundReport b = thm1_bound(a, r, p);
  return b.bound;
}

void run_rigidity(const ExperimentConfig& cfg, Artifact& art) {
  const AnyMatrix input = load_input(cfg);
  const std::string mode = effective_mode(cfg);
  SolverOptions opts;
  opts.budget = cfg.budget;
  Cell spectral = std::monostate{};
  Cell trivial = std::monostate{};
  const RigidityResult res = [&] {
    if (mode == "regular") return exact_regular_rigidity(as_fp(input, cfg.p), cfg.rank, opts);
    const SignMatrix a = as_sign(input);
    spectral = spectral_lower_bound(a, cfg.rank, cfg.p);
    trivial = std::int64_t(trivial_rank1_bound(a));
    return mode == "search" ? rank1_search(a, cfg.p, cfg.budget) : exact_boolean_rigidity(a, cfg.rank, cfg.p, opts);
  }();
  art.header.emplace_back("flags", "exhaustive=" + bool_text(res.exhaustive) + " sampled=false");
  art.columns = {"mode", "p", "rank", "rows", "cols", "value", "exhaustive", "witness_rank", "trivial_bound",
                 "spectral_bound", "difference"};
  Cell difference = std::monostate{};
  if (const auto* b = std::get_if<double>(&spectral)) difference = static_cast<double>(res.value) - *b;
  art.rows.push_back({mode, std::int64_t(res.p), std::int64_t(res.rank), std::int64_t(res.witness.U.cols()),
                      std::int64_t(res.witness.V.cols()), std::int64_t(res.value), res.exhaustive,
                      std::int64_t(fp_rank(res.witness.materialize())), trivial, spectral, difference});
}

void lift_row(const LowRankFp& l, std::int64_t instance, Artifact& art) {
  const int p = l.modulus();
  const std::size_t r = l.rank_bound();
  const LowRankCyclo lifted = lift_to_c(l);
  const bool exact = lift_is_exact(lifted);
  const auto product = lifted.product();
  std::vector<std::complex<double>> entries(product.size());
  std::transform(product.begin(), product.end(), entries.begin(), complex_embed);
  const std::size_t nrank = numerical_rank(entries, l.size(), l.size());
  const double magnitude = lifted.max_entry_magnitude();
  const double magnitude_bound = std::pow(lift_constants(p).c, static_cast<double>(r));

  Cell bool_rank = std::monostate{}, bool_bound = std::monostate{}, bool_ok = std::monostate{};
  if (p > 2) {
    const LowRankFp reg = booleanize_lowrank_fp(l);
    const FpMatrix mat = reg.materialize();
    bool_rank = std::int64_t(fp_rank(mat));
    bool_bound = std::int64_t(boolean_lift_rank_bound(p, r));
    const FpMatrix orig = l.materialize();
    bool same = true;
    for (std::size_t i = 0; i < orig.rows() && same; ++i)
      for (std::size_t j = 0; j < orig.cols(); ++j)
        if ((orig(i, j) == 1) != (mat(i, j) == 1)) {
          same = false;
          break;
        }
    bool_ok = same;
  }
  art.rows.push_back({instance, std::int64_t(l.size()), std::int64_t(p), std::int64_t(r), std::int64_t(lifted.rtilde()),
                      exact, std::int64_t(nrank), magnitude, magnitude_bound, magnitude_bound - magnitude, bool_rank,
                      bool_bound, bool_ok});
}

void run_lift(const ExperimentConfig& cfg, Artifact& art) {
  art.columns = {"instance",      "N",          "p",         "r",           "rtilde",          "exact",
                 "numerical_rank", "max_magnitude", "magnitude_bound", "difference", "boolean_rank",
                 "boolean_rank_bound", "boolean_values_ok"};
  if (!cfg.inputs.empty() || !cfg.base.empty()) {
    const FpMatrix m = as_fp(load_input(cfg), cfg.p);
    if (m.rows() != m.cols()) throw DomainError("lift: matrix must be square");
    lift_row(LowRankFp::from_matrix(m), 0, art);
    return;
  }
  SplitMix64 rng(cfg.seed);
  const std::uint64_t count = cfg.samples.value_or(kDefaultLiftInstances);
  for (std::uint64_t t = 0; t < count; ++t)
    lift_row(random_lowrank(cfg.rank, static_cast<std::size_t>(cfg.n), cfg.p, rng), std::int64_t(t), art);
}

void run_spectral_bound(const ExperimentConfig& cfg, Artifact& art) {
  const SignMatrix a = as_sign(load_input(cfg));
  if (a.rows() != a.cols()) throw DomainError("spectral-bound: matrix must be square");
  const SpectralReport sigma = largest_singular_value(a);
  art.header.emplace_back("flags", "exhaustive=" + bool_text(cfg.exhaustive) + " sampled=false");
  art.columns = {"r",    "p",      "N",     "sigma1",   "method", "iterations", "residual", "converged",
                 "c",    "rtilde", "bound", "positive", "measured", "difference"};
  SolverOptions opts;
  opts.budget = cfg.budget;
  for (std::size_t r = 0; r <= cfg.rank; ++r) {
    const BoundReport b = thm1_bound(sigma.sigma1, a.rows(), r, cfg.p);
    Cell measured = std::monostate{}, difference = std::monostate{};
    if (cfg.exhaustive) {
      const auto value = exact_boolean_rigidity(a, r, cfg.p, opts).value;
      measured = std::int64_t(value);
      difference = static_cast<double>(value) - b.bound;
    }
    art.rows.push_back({std::int64_t(r), std::int64_t(cfg.p), std::int64_t(a.rows()), sigma.sigma1,
                        to_string(sigma.method), std::int64_t(sigma.iterations), sigma.residual, sigma.converged, b.c,
                        b.rtilde, b.bound, b.positive, measured, difference});
  }
}

std::int64_t binom(int n, int k) {
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

void run_eigs(const ExperimentConfig& cfg, Artifact& art) {
  const int n = cfg.n;
  const auto lambda = distance_eigenvalues(n);
  const bool measure = cfg.exhaustive || n <= kMaxEigsMeasured;
  art.header.emplace_back("flags", "exhaustive=" + bool_text(measure) + " sampled=false");
  art.header.emplace_back("sigma1", format_double(hamming_sigma(n)));
  art.columns = {"weight", "multiplicity", "lambda", "measured", "difference"};
  for (int j = 0; j <= n; ++j) {
    Cell measured = std::monostate{}, difference = std::monostate{};
    if (measure) {
      // Character sum of row 0 of M_n against the parity of the low j bits.
      const std::uint64_t mask = (std::uint64_t{1} << j) - 1;
      std::int64_t sum = 0;
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
        const int entry = 2 * std::popcount(y) <= n ? 1 : -1;
        sum += (std::popcount(y & mask) % 2 ? -entry : entry);
      }
      measured = sum;
      difference = sum - lambda[static_cast<std::size_t>(j)];
    }
    art.rows.push_back({std::int64_t(j), binom(n, j), lambda[static_cast<std::size_t>(j)], measured, difference});
  }
}

void run_amplify_kron(const ExperimentConfig& cfg, Artifact& art) {
  const SignMatrix a = as_sign(load_input(cfg));
  if (a.rows() != a.cols()) throw DomainError("amplify-kron: base must be square");
  SplitMix64 noise(cfg.seed);
  FpMatrix l = sign_to_fp(a, cfg.p);
  if (cfg.delta > 0) l = flip_entries(l, cfg.delta, noise);
  const LowRankFp base = LowRankFp::from_matrix(l);
  const EntryMarginals m = entry_marginals(a, l);

  SeedSearchOptions opts;
  opts.mode = cfg.exhaustive ? SeedSearchMode::Exhaustive : SeedSearchMode::Sampled;
  opts.seed_samples = cfg.samples.value_or(kDefaultSeedSamples);
  opts.rng_seed = cfg.seed;
  opts.error.samples = kDefaultEntrySamples;
  opts.error.rng_seed = cfg.seed;
  const SeedSearchResult res = best_seed_search(a, base, cfg.n, opts);

  const Rational expected = kron_error_expected(cfg.p, m.p1, m.pm1, m.d1, m.dm1, cfg.n);
  const bool precondition = 2 * m.alpha + m.delta < Rational(1, 2);
  Cell bound = std::monostate{}, slack = std::monostate{};
  if (precondition) {
    const Rational b = kron_theorem_bound(m.alpha, m.delta, cfg.n);
    bound = cell_rational(b);
    slack = Rational(b - res.best.error).get_d();
  }
  Cell materialized = std::monostate{};
  const double side = std::pow(static_cast<double>(a.rows()), cfg.n);
  if (side * side <= static_cast<double>(1 << 24))
    materialized = std::int64_t(fp_rank(KronApproximant(base, res.seed, cfg.n).materialize()));

  std::string seed_text;
  for (int s : res.seed) seed_text += std::to_string(s);
  art.header.emplace_back("flags", "exhaustive_seeds=" + bool_text(res.exhaustive) +
                                       " exhaustive_entries=" + bool_text(res.best.exhaustive) +
                                       " sampled=" + bool_text(!res.exhaustive || !res.best.exhaustive) +
                                       " precondition=" + bool_text(precondition));
  art.header.emplace_back("entry_samples", std::to_string(opts.error.samples));
  art.columns = {"q",          "p",          "n",          "alpha",       "delta",          "best_seed",
                 "best_error", "mean_error", "expected_error", "difference", "theorem_bound", "bound_minus_best",
                 "rank_bound", "materialized_rank", "seeds_tried"};
  art.rows.push_back({std::int64_t(a.rows()), std::int64_t(cfg.p), std::int64_t(cfg.n), cell_rational(m.alpha),
                      cell_rational(m.delta), seed_text, cell_rational(res.best.error), cell_rational(res.mean),
                      cell_rational(expected), cell_rational(res.mean - expected), bound, slack,
                      std::int64_t(static_cast<std::size_t>(cfg.n) * base.rank_bound() + 1), materialized,
                      std::int64_t(res.seeds_tried)});
}

void run_amplify_maj(const ExperimentConfig& cfg, Artifact& art) {
  const int k = cfg.k, n = cfg.n;
  const Rational delta = rational_from_decimal(cfg.delta);
  const Rational predicted = maj_amplified_error(k, n, delta);
  const FpMatrix base = sign_to_fp(distance_matrix(k), cfg.p);
  const SignMatrix target = distance_matrix(n);
  const std::size_t side = target.rows(), suffix = std::size_t{1} << (n - k), qk = base.rows();
  const double cells = static_cast<double>(side) * static_cast<double>(side);

  // Target +1 counts per prefix pair.
  std::vector<std::uint64_t> plus(qk * qk, 0);
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y)
      if (!target.negative(x, y)) ++plus[(x / suffix) * qk + y / suffix];
  const double block = static_cast<double>(suffix) * static_cast<double>(suffix);
  auto member_error = [&](const FpMatrix& m) {
    double wrong = 0;
    for (std::size_t a = 0; a < qk; ++a)
      for (std::size_t b = 0; b < qk; ++b) {
        const double pos = static_cast<double>(plus[a * qk + b]);
        wrong += m(a, b) == 1 ? block - pos : pos;
      }
    return wrong / cells;
  };

  Cell measured, difference, se = std::monostate{};
  std::uint64_t samples = 0;
  if (cfg.delta == 0) {
    const auto distance = boolean_distance(target, PrefixApproximant(base, 2, k, n).materialize());
    Rational exact(static_cast<long>(distance), static_cast<long>(side * side));
    exact.canonicalize();
    measured = cell_rational(exact);
    difference = cell_rational(exact - predicted);
    samples = 1;
  } else {
    samples = cfg.samples.value_or(kDefaultEnsembleSize);
    const Ensemble ens = flip_noise_ensemble(base, cfg.delta, samples, cfg.seed);
    double sum = 0, sum_sq = 0;
    for (const auto& member : ens.members()) {
      const double e = member_error(member.matrix);
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = samples > 1 ? (sum_sq - sum * mean) / static_cast<double>(samples - 1) : 0.0;
    measured = mean;
    difference = mean - predicted.get_d();
    se = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  }
  art.header.emplace_back("flags", "exhaustive=" + bool_text(cfg.delta == 0) + " sampled=" + bool_text(cfg.delta != 0));
  art.columns = {"k",          "n",         "delta",      "agreement_prob", "measured_error", "predicted_error",
                 "difference", "standard_error", "samples", "rank"};
  art.rows.push_back({std::int64_t(k), std::int64_t(n), cell_rational(delta),
                      cell_rational(majority_agreement_prob(k, n)), measured, cell_rational(predicted), difference, se,
                      std::int64_t(samples), std::int64_t(fp_rank(base))});
}

void run_circuit_size(const ExperimentConfig& cfg, Artifact& art) {
  if (!cfg.rigidity) throw ConfigError("circuit-size: --R is required");
  art.columns = {"q", "r", "R", "d", "exponent"};
  for (int d = 1; d <= cfg.d; ++d)
    art.rows.push_back({cfg.q, std::int64_t(cfg.rank), *cfg.rigidity, std::int64_t(d),
                        circuit_exponent(cfg.q, static_cast<double>(cfg.rank), *cfg.rigidity, d)});
}

void run_obstruction(const ExperimentConfig& cfg, Artifact& art) {
  const double size = std::ldexp(1.0, cfg.k);
  const double lb = cfg.rigidity.value_or(size * size / 3.0);
  const double r = static_cast<double>(cfg.rank);
  const bool holds = obstruction_check(cfg.k, r, lb);
  art.columns = {"k", "r", "R_lb", "lhs", "rhs", "holds"};
  art.rows.push_back({std::int64_t(cfg.k), std::int64_t(cfg.rank), lb, (r + 1) * (r + lb / size), size, holds});
}

void run_schedule(const ExperimentConfig& cfg, Artifact& art) {
  const std::string mode = effective_mode(cfg);
  const double n = static_cast<double>(cfg.n);
  const double param = mode == "kron" ? cfg.eps : cfg.beta;
  const Schedule s = mode == "kron" ? razborov_schedule_kron(n, cfg.eps, cfg.c) : razborov_schedule_maj(n, cfg.beta, cfg.c);
  art.columns = {"kind", "n", "param", "c", "k_real", "k", "rank", "rhs", "log2_gap"};
  art.rows.push_back({mode, std::int64_t(cfg.n), param, cfg.c, s.k_real, std::int64_t(s.k), s.rank, s.rhs, s.log2_gap});
}

// ---------------------------------------------------------------- render

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return bool_text(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

ordered_json json_cell(const Cell& c) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    ordered_json operator()(bool v) const { return v; }
    ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

template <class T>
T get_field(const ordered_json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") cfg.subcommand = get_field<std::string>(value, key);
    else if (key == "inputs") {
      if (value.is_string()) cfg.inputs = {value.get<std::string>()};
      else cfg.inputs = get_field<std::vector<std::string>>(value, key);
    } else if (key == "base") cfg.base = get_field<std::string>(value, key);
    else if (key == "p") cfg.p = get_field<int>(value, key);
    else if (key == "rank") cfg.rank = get_field<std::size_t>(value, key);
    else if (key == "n") cfg.n = get_field<int>(value, key);
    else if (key == "k") cfg.k = get_field<int>(value, key);
    else if (key == "seed") cfg.seed = get_field<std::uint64_t>(value, key);
    else if (key == "samples") {
      if (!value.is_null()) cfg.samples = get_field<std::uint64_t>(value, key);
    } else if (key == "exhaustive") cfg.exhaustive = get_field<bool>(value, key);
    else if (key == "budget") cfg.budget = get_field<double>(value, key);
    else if (key == "out") cfg.out = get_field<std::string>(value, key);
    else if (key == "format") cfg.format = get_field<std::string>(value, key);
    else if (key == "mode") cfg.mode = get_field<std::string>(value, key);
    else if (key == "q") cfg.q = get_field<double>(value, key);
    else if (key == "d") cfg.d = get_field<int>(value, key);
    else if (key == "R") {
      if (!value.is_null()) cfg.rigidity = get_field<double>(value, key);
    } else if (key == "eps") cfg.eps = get_field<double>(value, key);
    else if (key == "beta") cfg.beta = get_field<double>(value, key);
    else if (key == "c") cfg.c = get_field<double>(value, key);
    else if (key == "delta") cfg.delta = get_field<double>(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["subcommand"] = cfg.subcommand;
  j["inputs"] = cfg.inputs;
  j["base"] = cfg.base;
  j["p"] = cfg.p;
  j["rank"] = cfg.rank;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples ? ordered_json(*cfg.samples) : ordered_json(nullptr);
  j["exhaustive"] = cfg.exhaustive;
  j["budget"] = cfg.budget;
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  j["mode"] = cfg.mode;
  j["q"] = cfg.q;
  j["d"] = cfg.d;
  j["R"] = cfg.rigidity ? ordered_json(*cfg.rigidity) : ordered_json(nullptr);
  j["eps"] = cfg.eps;
  j["beta"] = cfg.beta;
  j["c"] = cfg.c;
  j["delta"] = cfg.delta;
  return j.dump();
}

std::string effective_format(const ExperimentConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  return cfg.subcommand == "gen" ? "mat" : "csv";
}

std::string effective_mode(const ExperimentConfig& cfg) {
  if (!cfg.mode.empty()) return cfg.mode;
  if (cfg.subcommand == "rigidity") return "boolean";
  if (cfg.subcommand == "schedule") return "kron";
  return "";
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), cfg.subcommand) == kSubcommands.end())
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  if (!is_prime(cfg.p) || cfg.p > kMaxPrime)
    throw ConfigError("p must be a prime <= " + std::to_string(kMaxPrime) + ", got " + std::to_string(cfg.p));
  const std::string format = effective_format(cfg);
  if (format != "csv" && format != "json" && !(format == "mat" && cfg.subcommand == "gen"))
    throw ConfigError("format must be csv or json (mat for gen), got '" + format + "'");
  const std::string mode = effective_mode(cfg);
  if (cfg.subcommand == "rigidity") {
    parse_rigidity_mode(mode == "search" ? "boolean" : mode);
    if (mode == "search" && cfg.rank != 1) throw ConfigError("rigidity --mode search requires --rank 1");
  } else if (cfg.subcommand == "schedule") {
    if (mode != "kron" && mode != "maj") throw ConfigError("schedule mode must be kron or maj, got '" + mode + "'");
  } else if (!cfg.mode.empty()) {
    throw ConfigError(cfg.subcommand + " takes no --mode");
  }
  if (cfg.inputs.size() > 1) throw ConfigError("at most one input matrix is accepted");
  if (!cfg.inputs.empty() && !cfg.base.empty()) throw ConfigError("--in and --base are mutually exclusive");
  if (cfg.subcommand == "gen" && cfg.base.empty() && cfg.inputs.empty()) throw ConfigError("gen requires --base");
  if (cfg.n < 1) throw ConfigError("n must be positive");
  if (cfg.k < 1) throw ConfigError("k must be positive");
  if (!(cfg.budget > 0)) throw ConfigError("budget must be positive");
  if (cfg.samples && *cfg.samples == 0) throw ConfigError("samples must be positive");
  if (!(cfg.delta >= 0 && cfg.delta <= 1)) throw ConfigError("delta must lie in [0, 1]");
  if (cfg.subcommand == "amplify-maj") {
    if (cfg.k > cfg.n) throw ConfigError("amplify-maj requires k <= n");
    if (cfg.n > kMaxMajPower) throw ConfigError("amplify-maj requires n <= " + std::to_string(kMaxMajPower));
    if (cfg.delta > 0.5) throw ConfigError("amplify-maj requires delta <= 1/2");
  }
  if (cfg.subcommand == "amplify-kron" && cfg.n > 32) throw ConfigError("amplify-kron requires n <= 32");
  if (cfg.subcommand == "eigs" && cfg.n > kMaxDistanceOrder)
    throw ConfigError("eigs requires n <= " + std::to_string(kMaxDistanceOrder));
  if (cfg.subcommand == "lift" && cfg.inputs.empty() && cfg.base.empty() && cfg.rank < 1)
    throw ConfigError("lift requires rank >= 1");
  if (cfg.subcommand == "obstruction" && cfg.k > 1000) throw ConfigError("obstruction requires k <= 1000");
}

Artifact run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Artifact art;
  art.header.emplace_back("version", std::string("rigidlab ") + version());
  art.header.emplace_back("subcommand", cfg.subcommand);
  art.header.emplace_back("config", config_to_json(cfg));
  art.header.emplace_back("seed", std::to_string(cfg.seed));
  const std::string& s = cfg.subcommand;
  if (s == "gen") run_gen(cfg, art);
  else if (s == "rank") run_rank(cfg, art);
  else if (s == "rigidity") run_rigidity(cfg, art);
  else if (s == "lift") run_lift(cfg, art);
  else if (s == "spectral-bound") run_spectral_bound(cfg, art);
  else if (s == "eigs") run_eigs(cfg, art);
  else if (s == "amplify-kron") run_amplify_kron(cfg, art);
  else if (s == "amplify-maj") run_amplify_maj(cfg, art);
  else if (s == "circuit-size") run_circuit_size(cfg, art);
  else if (s == "obstruction") run_obstruction(cfg, art);
  else run_schedule(cfg, art);
  if (std::none_of(art.header.begin(), art.header.end(), [](const auto& kv) { return kv.first == "flags"; }))
    art.header.emplace_back("flags", "exhaustive=true sampled=false");
  return art;
}

std::string render(const Artifact& art, const std::string& format, const std::string& timestamp) {
  if (format == "mat") {
    if (!art.matrix_text) throw ConfigError("format mat is only available for gen");
    return *art.matrix_text;
  }
  if (format == "json") {
    ordered_json header;
    for (const auto& [key, value] : art.header) header[key] = value;
    header["timestamp"] = timestamp;
    ordered_json rows = ordered_json::array();
    for (const auto& row : art.rows) {
      ordered_json obj;
      for (std::size_t i = 0; i < art.columns.size(); ++i) obj[art.columns[i]] = json_cell(row[i]);
      rows.push_back(std::move(obj));
    }
    ordered_json doc;
    doc["header"] = std::move(header);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& [key, value] : art.header) out << "# " << key << ": " << value << "\n";
  out << "# timestamp: " << timestamp << "\n";
  for (std::size_t i = 0; i < art.columns.size(); ++i) out << (i ? "," : "") << art.columns[i];
  out << "\n";
  for (const auto& row : art.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

void write_artifact(const Artifact& art, const ExperimentConfig& cfg, std::ostream& fallback) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  const std::string text = render(art, effective_format(cfg), stamp);
  if (cfg.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + cfg.out);
  file << text;
  if (!file) throw std::runtime_error("failed writing output file: " + cfg.out);
}

std::string strip_timestamp(const std::string& rendered) {
  std::istringstream in(rendered);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0 || line.find("\"timestamp\":") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace rigidlab
