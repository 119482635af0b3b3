#pragma once
// Closed-form parameter arithmetic: circuit-size exponent, the rigidity
// obstruction inequality, and the parameter schedules for the conditional
// Razborov-rigidity statements.

#include <cstdint>

namespace rigidlab {

/// 1 + c/d with c = log_q((r + 1)(r + R/q)).
/// Throws DomainError for q < 2, d < 1, R < 0, r < 0 or a zero argument.
double circuit_exponent(double q, double r, double rigidity, int d);

/// (r + 1)(r + R_lb / 2^k) >= 2^k. Throws DomainError for r <= 1.
bool obstruction_check(int k, double r, double rigidity_lb);

struct Schedule {
  double k_real;     // unrounded formula value
  std::uint64_t k;   // rounded to nearest, clamped below by the minimum
  double rank;
  double rhs;        // target error bound, may round to 1/2 in double
  double log2_gap;   // log2(1/2 - rhs), exact even when rhs rounds
};

/// k = 2^{(eps log2(n) / 2)^{1/c}} (k >= 2), rank = n^{1 + eps},
/// rhs = 1/2 - (1/2) 12^{-n/k}. Requires n >= 4, eps > 0, c > 0.
Schedule razborov_schedule_kron(double n, double eps, double c);

/// k = 2^{(log2 log2 n + log2 beta)^{1/c}} (k >= 1), rank = beta log2 n,
/// rhs = 1/2 - sqrt(k / n). Requires beta > 0, c > 0 and log2 log2 n + log2 beta > 0.
Schedule razborov_schedule_maj(double n, double beta, double c);

}  // namespace rigidlab
