#include "rigidlab/rigidity.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "rigidlab/errors.hpp"
#include "rigidlab/field.hpp"

namespace rigidlab {

namespace {

using Mask = std::uint64_t;

// Per-column targets. Boolean mode uses one mask (bit i set iff A[i,j] = -1)
// and counts XOR bits against "x_i != 1". Regular mode uses one mask per
// residue and counts agreements.
struct Targets {
  RigidityMode mode;
  int p;
  std::size_t rows, cols;
  std::vector<Mask> masks;  // cols x k, k = 1 (boolean) or p (regular)

  std::size_t width() const { return mode == RigidityMode::Boolean ? 1 : static_cast<std::size_t>(p); }

  // Residue vector x (length rows) to masks.
  void encode(const std::uint8_t* x, Mask* out) const {
    std::fill(out, out + width(), 0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (mode == RigidityMode::Boolean) {
        if (x[i] != 1) out[0] |= Mask{1} << i;
      } else {
        out[x[i]] |= Mask{1} << i;
      }
    }
  }

  std::size_t score(std::size_t col, const Mask* x) const {
    const Mask* t = masks.data() + col * width();
    if (mode == RigidityMode::Boolean) return static_cast<std::size_t>(std::popcount(x[0] ^ t[0]));
    std::size_t agree = 0;
    for (std::size_t v = 0; v < width(); ++v) agree += static_cast<std::size_t>(std::popcount(x[v] & t[v]));
    return rows - agree;
  }
};

Targets boolean_targets(const SignMatrix& a, int p) {
  Targets t{RigidityMode::Boolean, p, a.rows(), a.cols(), std::vector<Mask>(a.cols(), 0)};
  for (std::size_t j = 0; j < a.cols(); ++j) t.masks[j] = a.column_negative_mask(j);
  return t;
}

Targets regular_targets(const FpMatrix& a) {
  const int p = a.modulus();
  Targets t{RigidityMode::Regular, p, a.rows(), a.cols(), {}};
  t.masks.assign(a.cols() * static_cast<std::size_t>(p), 0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t.masks[j * static_cast<std::size_t>(p) + a(i, j)] |= Mask{1} << i;
  return t;
}

double gaussian_binomial(std::size_t n, std::size_t k, int p) {
  double out = 1.0;
  const double q = p;
  for (std::size_t i = 0; i < k; ++i)
    out *= (std::pow(q, static_cast<double>(n - i)) - 1.0) / (std::pow(q, static_cast<double>(i + 1)) - 1.0);
  return out;
}

std::size_t ipow(int base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) out *= static_cast<std::size_t>(base);
  return out;
}

struct Task {
  std::size_t dim;
  std::vector<std::size_t> pivots;
};

struct TaskResult {
  std::size_t value = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint8_t> basis;  // dim x rows
  std::vector<std::size_t> choice;  // per column, span-coefficient index
};

std::vector<Task> enumerate_tasks(std::size_t rows, std::size_t dmax) {
  std::vector<Task> tasks;
  for (std::size_t d = 0; d <= dmax; ++d) {
    std::vector<std::size_t> piv(d);
    for (std::size_t k = 0; k < d; ++k) piv[k] = k;
    while (true) {
      tasks.push_back({d, piv});
      // Next combination in lexicographic order.
      std::size_t k = d;
      while (k > 0 && piv[k - 1] == rows - d + k - 1) --k;
      if (k == 0) break;
      ++piv[k - 1];
      for (std::size_t m = k; m < d; ++m) piv[m] = piv[m - 1] + 1;
    }
  }
  return tasks;
}

void run_task(const Targets& t, const Task& task, std::atomic<std::size_t>& global_best, TaskResult& out) {
  const std::size_t rows = t.rows, d = task.dim, w = t.width();
  const int p = t.p;
  // Free positions: for basis row k, non-pivot columns after its pivot.
  std::vector<std::pair<std::size_t, std::size_t>> free;  // (row k, position)
  std::vector<bool> is_pivot(rows, false);
  for (auto c : task.pivots) is_pivot[c] = true;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t c = task.pivots[k] + 1; c < rows; ++c)
      if (!is_pivot[c]) free.emplace_back(k, c);

  std::vector<std::uint8_t> basis(d * rows, 0);
  for (std::size_t k = 0; k < d; ++k) basis[k * rows + task.pivots[k]] = 1;
  std::vector<int> digits(free.size(), 0);

  const std::size_t span = ipow(p, d);
  std::vector<std::uint8_t> vec(rows);
  std::vector<Mask> span_masks(span * w);
  std::vector<std::size_t> choice(t.cols);

  while (true) {
    for (std::size_t f = 0; f < free.size(); ++f)
      basis[free[f].first * rows + free[f].second] = static_cast<std::uint8_t>(digits[f]);

    for (std::size_t idx = 0; idx < span; ++idx) {
      std::fill(vec.begin(), vec.end(), 0);
      std::size_t rest = idx;
      for (std::size_t k = d; k-- > 0;) {
        const auto c = static_cast<int>(rest % static_cast<std::size_t>(p));
        rest /= static_cast<std::size_t>(p);
        if (c == 0) continue;
        for (std::size_t i = 0; i < rows; ++i) vec[i] = static_cast<std::uint8_t>((vec[i] + c * basis[k * rows + i]) % p);
      }
      t.encode(vec.data(), span_masks.data() + idx * w);
    }

    std::size_t total = 0;
    bool pruned = false;
    for (std::size_t j = 0; j < t.cols; ++j) {
      std::size_t best = std::numeric_limits<std::size_t>::max(), arg = 0;
      for (std::size_t idx = 0; idx < span; ++idx) {
        const std::size_t s = t.score(j, span_masks.data() + idx * w);
        if (s < best) {
          best = s;
          arg = idx;
          if (s == 0) break;
        }
      }
      choice[j] = arg;
      total += best;
      if (total >= out.value || total > global_best.load(std::memory_order_relaxed)) {
        pruned = true;
        break;
      }
    }
    if (!pruned) {
      out.value = total;
      out.basis = basis;
      out.choice = choice;
      std::size_t cur = global_best.load(std::memory_order_relaxed);
      while (total < cur && !global_best.compare_exchange_weak(cur, total, std::memory_order_relaxed)) {
      }
    }

    // Advance free entries, last free variable fastest.
    std::size_t f = free.size();
    while (f > 0) {
      if (++digits[f - 1] < p) break;
      digits[f - 1] = 0;
      --f;
    }
    if (f == 0) break;
  }
}

RigidityResult solve(const Targets& t, std::size_t r, const SolverOptions& options, const FpMatrix& exact_fit) {
  const int p = t.p;
  if (t.rows > 64) throw DomainError("exact rigidity solver supports at most 64 rows");
  if (r >= std::min(t.rows, t.cols)) {
    return {0, LowRankFp::from_matrix(exact_fit), t.mode, r, p, true};
  }
  const double work = exact_solver_work(t.rows, t.cols, r, p);
  if (work > options.budget)
    throw CapExceeded("exact rigidity needs ~" + std::to_string(work) + " operations, over the work budget " +
                      std::to_string(options.budget));

  const auto tasks = enumerate_tasks(t.rows, r);
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> global_best{std::numeric_limits<std::size_t>::max()};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      run_task(t, tasks[i], global_best, results[i]);
  };
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value < results[best].value) best = i;
  const TaskResult& winner = results[best];
  const std::size_t d = tasks[best].dim;
  FpMatrix u(d, t.rows, p, winner.basis);
  FpMatrix v(d, t.cols, p);
  for (std::size_t j = 0; j < t.cols; ++j) {
    std::size_t rest = winner.choice[j];
    for (std::size_t k = d; k-- > 0;) {
      v.set(k, j, static_cast<std::int64_t>(rest % static_cast<std::size_t>(p)));
      rest /= static_cast<std::size_t>(p);
    }
  }
  return {winner.value, LowRankFp(std::move(u), std::move(v)), t.mode, r, p, true};
}

// Residue matrix whose Booleanization is a (exact for every p).
FpMatrix boolean_preimage(const SignMatrix& a, int p) {
  FpMatrix m(a.rows(), a.cols(), p);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.negative(i, j) ? 0 : 1);
  return m;
}

template <class Distance>
std::size_t brute_force(std::size_t rows, std::size_t cols, std::size_t r, int p, double budget, Distance distance) {
  const double pairs = std::pow(static_cast<double>(p), static_cast<double>(r * (rows + cols)));
  if (pairs * static_cast<double>(rows * cols) > budget)
    throw CapExceeded("brute-force oracle needs ~" + std::to_string(pairs * static_cast<double>(rows * cols)) +
                      " operations, over the budget " + std::to_string(budget));
  const std::size_t cells = r * (rows + cols);
  std::vector<int> digits(cells, 0);
  FpMatrix u(r, rows, p), v(r, cols, p);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  while (true) {
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < rows; ++i) u.set(k, i, digits[k * rows + i]);
      for (std::size_t j = 0; j < cols; ++j) v.set(k, j, digits[r * rows + k * cols + j]);
    }
    best = std::min(best, distance(LowRankFp(u, v).materialize()));
    std::size_t c = cells;
    while (c > 0) {
      if (++digits[c - 1] < p) break;
      digits[c - 1] = 0;
      --c;
    }
    if (c == 0) break;
  }
  return best;
}

}  // namespace

std::string to_string(RigidityMode m) { return m == RigidityMode::Boolean ? "boolean" : "regular"; }

RigidityMode parse_rigidity_mode(const std::string& s) {
  if (s == "boolean") return RigidityMode::Boolean;
  if (s == "regular") return RigidityMode::Regular;
  throw ConfigError("unknown rigidity mode '" + s + "' (expected boolean or regular)");
}

double exact_solver_work(std::size_t rows, std::size_t cols, std::size_t r, int p) {
  double work = 0.0;
  for (std::size_t d = 0; d <= std::min(r, rows); ++d)
    work += gaussian_binomial(rows, d, p) * std::pow(static_cast<double>(p), static_cast<double>(d)) *
            static_cast<double>(cols + rows);
  return work;
}

RigidityResult exact_boolean_rigidity(const SignMatrix& a, std::size_t r, int p, const SolverOptions& options) {
  require_supported_prime(p);
  return solve(boolean_targets(a, p), r, options, boolean_preimage(a, p));
}

RigidityResult exact_regular_rigidity(const FpMatrix& a, std::size_t r, const SolverOptions& options) {
  return solve(regular_targets(a), r, options, a);
}

std::size_t bruteforce_oracle(const SignMatrix& a, std::size_t r, int p, double budget) {
  require_supported_prime(p);
  return brute_force(a.rows(), a.cols(), r, p, budget, [&](const FpMatrix& l) { return boolean_distance(a, l); });
}

std::size_t bruteforce_oracle(const FpMatrix& a, std::size_t r, double budget) {
  return brute_force(a.rows(), a.cols(), r, a.modulus(), budget,
                     [&](const FpMatrix& l) { return hamming_distance(a, l); });
}

RigidityResult rank1_search(const SignMatrix& a, int p, double budget) {
  require_supported_prime(p);
  const std::size_t rows = a.rows(), cols = a.cols();
  if (rows > 64) throw DomainError("rank1_search supports at most 64 rows");
  const Targets t = boolean_targets(a, p);
  const auto ps = static_cast<std::size_t>(p);
  const Mask full = rows == 64 ? ~Mask{0} : (Mask{1} << rows) - 1;

  // masks[c]: bit i set iff c * u_i != 1 (mod p), for c in [0, p).
  std::vector<Mask> masks(ps);
  std::vector<std::uint8_t> u(rows, 0);
  auto rebuild = [&] {
    for (std::size_t c = 0; c < ps; ++c) {
      masks[c] = 0;
      for (std::size_t i = 0; i < rows; ++i)
        if (c * u[i] % ps != 1) masks[c] |= Mask{1} << i;
    }
  };

  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint8_t> best_u(rows, 0);
  std::vector<std::uint8_t> best_c(cols, 0), cur_c(cols, 0);
  const double per_u = static_cast<double>(cols * ps);
  double spent = 0.0;
  bool exhaustive = true;

  auto evaluate = [&] {
    std::size_t total = 0;
    for (std::size_t j = 0; j < cols && total < best; ++j) {
      std::size_t cbest = std::numeric_limits<std::size_t>::max();
      for (std::size_t c = 0; c < ps; ++c) {
        const auto s = static_cast<std::size_t>(std::popcount((masks[c] ^ t.masks[j]) & full));
        if (s < cbest) {
          cbest = s;
          cur_c[j] = static_cast<std::uint8_t>(c);
        }
      }
      total += cbest;
    }
    if (total < best) {
      best = total;
      best_u = u;
      best_c = cur_c;
    }
  };

  // u = 0 and u = all-ones come first so that the trivial constant-matrix
  // bound holds even for a truncated scan.
  rebuild();
  evaluate();
  std::fill(u.begin(), u.end(), 1);
  rebuild();
  evaluate();
  spent += 2 * per_u;
  // Leading nonzero entry 1 at position lead; later entries free.
  for (std::size_t lead = rows; lead-- > 0 && exhaustive;) {
    std::fill(u.begin(), u.end(), 0);
    u[lead] = 1;
    rebuild();
    while (true) {
      if (spent + per_u > budget) {
        exhaustive = false;
        break;
      }
      evaluate();
      spent += per_u;
      // Odometer over positions lead+1..rows-1, last fastest; update bit masks.
      bool carry = true;
      for (std::size_t i = rows; carry && i > lead + 1;) {
        --i;
        u[i] = static_cast<std::uint8_t>((u[i] + 1) % ps);
        const Mask bit = Mask{1} << i;
        for (std::size_t c = 0; c < ps; ++c) {
          if (c * u[i] % ps != 1) masks[c] |= bit;
          else masks[c] &= ~bit;
        }
        carry = u[i] == 0;
      }
      if (carry) break;
    }
  }

  FpMatrix um(1, rows, p, best_u);
  FpMatrix vm(1, cols, p, best_c);
  return {best, LowRankFp(std::move(um), std::move(vm)), RigidityMode::Boolean, 1, p, exhaustive};
}

std::size_t trivial_rank1_bound(const SignMatrix& a) { return std::min(a.count_positive(), a.count_negative()); }

}  // namespace rigidlab
