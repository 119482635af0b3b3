#pragma once
// Exact rigidity of small matrices by column-space enumeration, a brute-force
// (U, V) oracle, and a rank-1 upper-bound search.

#include <cstddef>
#include <string>

#include "rigidlab/matrix.hpp"

namespace rigidlab {

enum class RigidityMode { Boolean, Regular };

std::string to_string(RigidityMode m);
RigidityMode parse_rigidity_mode(const std::string& s);

struct RigidityResult {
  std::size_t value;   // entries changed
  LowRankFp witness;
  RigidityMode mode;
  std::size_t rank;
  int p;
  bool exhaustive;
};

inline constexpr double kDefaultWorkBudget = 1e10;

struct SolverOptions {
  double budget = kDefaultWorkBudget;  // popcount-equivalent operations
  unsigned threads = 0;                // 0: hardware concurrency
};

/// Estimated operation count of the column-space enumeration.
double exact_solver_work(std::size_t rows, std::size_t cols, std::size_t r, int p);

/// Minimum number of entries of A that disagree with bool(L) over rank <= r
/// matrices L over F_p. Subspaces are visited by dimension, then pivot set,
/// then free entries (all lexicographic); the first minimum wins, and each
/// column takes the smallest span-coefficient index among its best choices.
/// Requires rows <= 64. Throws CapExceeded when the work exceeds the budget.
RigidityResult exact_boolean_rigidity(const SignMatrix& a, std::size_t r, int p, const SolverOptions& options = {});

/// Same enumeration with exact residue equality.
RigidityResult exact_regular_rigidity(const FpMatrix& a, std::size_t r, const SolverOptions& options = {});

inline constexpr double kDefaultOracleBudget = 1e9;

/// Minimum over all (U, V) in F_p^{r x rows} x F_p^{r x cols} of the distance
/// to U^T V. Boolean mode.
std::size_t bruteforce_oracle(const SignMatrix& a, std::size_t r, int p, double budget = kDefaultOracleBudget);
/// Regular mode.
std::size_t bruteforce_oracle(const FpMatrix& a, std::size_t r, double budget = kDefaultOracleBudget);

/// Best rank-1 Boolean approximation found by scanning u up to scalar
/// multiples (u = 0, u = all-ones, then every u whose leading nonzero entry
/// is 1, leading position moving left) and choosing the best multiple of u
/// per column. exhaustive is set iff the scan finished within the budget.
/// Requires rows <= 64.
RigidityResult rank1_search(const SignMatrix& a, int p, double budget = kDefaultWorkBudget);

/// min(#(+1), #(-1)).
std::size_t trivial_rank1_bound(const SignMatrix& a);

}  // namespace rigidlab
