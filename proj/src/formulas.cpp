#include "rigidlab/formulas.hpp"

#include <algorithm>
#include <cmath>

#include "rigidlab/errors.hpp"

namespace rigidlab {

namespace {

std::uint64_t round_at_least(double k, std::uint64_t floor_value) {
  if (!std::isfinite(k) || k >= 1.8e19) throw DomainError("schedule: k overflows 64 bits");
  return std::max(floor_value, static_cast<std::uint64_t>(std::llround(k)));
}

}  // namespace

double circuit_exponent(double q, double r, double rigidity, int d) {
  if (!(q >= 2)) throw DomainError("circuit_exponent: q must be at least 2");
  if (d < 1) throw DomainError("circuit_exponent: d must be at least 1");
  if (!(rigidity >= 0) || !(r >= 0)) throw DomainError("circuit_exponent: r and R must be nonnegative");
  const double arg = (r + 1) * (r + rigidity / q);
  if (arg <= 0) throw DomainError("circuit_exponent: (r + 1)(r + R/q) = 0, exponent undefined");
  return 1.0 + std::log(arg) / std::log(q) / d;
}

bool obstruction_check(int k, double r, double rigidity_lb) {
  if (!(r > 1)) throw DomainError("obstruction_check: requires r > 1");
  if (k < 0 || k > 1000) throw DomainError("obstruction_check: k out of range");
  const double size = std::ldexp(1.0, k);
  return (r + 1) * (r + rigidity_lb / size) >= size;
}

Schedule razborov_schedule_kron(double n, double eps, double c) {
  if (!(n >= 4)) throw DomainError("razborov_schedule_kron: n must be at least 4");
  if (!(eps > 0) || !(c > 0)) throw DomainError("razborov_schedule_kron: eps and c must be positive");
  Schedule s;
  s.k_real = std::exp2(std::pow(eps * std::log2(n) / 2.0, 1.0 / c));
  s.k = round_at_least(s.k_real, 2);
  s.rank = std::pow(n, 1.0 + eps);
  const double exponent = n / static_cast<double>(s.k);
  s.log2_gap = -1.0 - exponent * std::log2(12.0);
  s.rhs = 0.5 - 0.5 * std::pow(12.0, -exponent);
  return s;
}

Schedule razborov_schedule_maj(double n, double beta, double c) {
  if (!(beta > 0) || !(c > 0)) throw DomainError("razborov_schedule_maj: beta and c must be positive");
  if (!(n > 2)) throw DomainError("razborov_schedule_maj: n must exceed 2");
  const double base = std::log2(std::log2(n)) + std::log2(beta);
  if (!(base > 0)) throw DomainError("razborov_schedule_maj: log log n + log beta must be positive");
  Schedule s;
  s.k_real = std::exp2(std::pow(base, 1.0 / c));
  s.k = round_at_least(s.k_real, 1);
  s.rank = beta * std::log2(n);
  const double gap = std::sqrt(static_cast<double>(s.k) / n);
  s.rhs = 0.5 - gap;
  s.log2_gap = std::log2(gap);
  return s;
}

}  // namespace rigidlab
