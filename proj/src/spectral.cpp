#include "rigidlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "rigidlab/errors.hpp"
#include "rigidlab/lift.hpp"

namespace rigidlab {

namespace {

Eigen::MatrixXd to_dense(const SignMatrix& a) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return m;
}

SpectralReport power_iterate(const Eigen::MatrixXd& a, Eigen::VectorXd x, const PowerIterationOptions& options) {
  SpectralReport report;
  x.normalize();
  double lambda = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd y = a.transpose() * (a * x);
    const double next = x.dot(y);
    report.iterations = it;
    const double norm = y.norm();
    if (norm == 0.0) {
      lambda = 0.0;
      report.residual = 0.0;
      report.converged = true;
      break;
    }
    report.residual = it == 1 ? std::numeric_limits<double>::infinity() : std::abs(next - lambda) / std::abs(next);
    lambda = next;
    x = y / norm;
    if (report.residual < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.sigma1 = std::sqrt(std::max(lambda, 0.0));
  return report;
}

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

std::string to_string(SpectralMethod m) {
  switch (m) {
    case SpectralMethod::PowerIteration: return "power-iteration";
    case SpectralMethod::ClosedForm: return "closed-form";
    case SpectralMethod::ExactGram: return "exact-gram";
  }
  return "unknown";
}

SpectralReport largest_singular_value(const SignMatrix& a, const PowerIterationOptions& options) {
  if (a.rows() == 0 || a.cols() == 0) return SpectralReport{0.0, SpectralMethod::PowerIteration, 0, 0.0, true, false};
  const Eigen::MatrixXd m = to_dense(a);
  SpectralReport report = power_iterate(m, Eigen::VectorXd::Ones(m.cols()), options);
  // A start vector that is already an eigenvector (or in the kernel) can hide
  // the top eigenvalue; retry from e_0 and keep the larger estimate.
  if (report.iterations <= 2 || report.sigma1 == 0.0) {
    SpectralReport alt = power_iterate(m, Eigen::VectorXd::Unit(m.cols(), 0), options);
    alt.restarted = true;
    if (alt.sigma1 > report.sigma1) return alt;
    report.restarted = true;
  }
  return report;
}

double kron_sigma(const SignMatrix& a, int n) {
  if (n < 0) throw DomainError("kron_sigma: negative power");
  if (n == 0) return 1.0;
  return std::pow(largest_singular_value(a).sigma1, n);
}

SigmaCheck sigma_lt_q_check(const SignMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("sigma_lt_q_check: matrix must be square and nonempty");
  const double q = static_cast<double>(a.rows());
  const double sigma = largest_singular_value(a).sigma1;
  const bool strict = sigma < q - 1e-9;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_dense(a));
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 1e-9 * s(0)) ++rank;
  if (strict != (rank > 1))
    throw std::logic_error("sigma_lt_q_check: sigma_1 < q disagrees with numerical rank " + std::to_string(rank));
  return {sigma, strict};
}

std::int64_t krawtchouk(int n, int w, int j) {
  std::int64_t sum = 0;
  for (int i = 0; i <= std::min(j, w); ++i) {
    const std::int64_t term = binom(j, i) * binom(n - j, w - i);
    sum += i % 2 == 0 ? term : -term;
  }
  return sum;
}

std::vector<std::int64_t> distance_eigenvalues(int n) {
  if (n < 0 || n > kMaxDistanceOrder)
    throw DomainError("distance_eigenvalues: n must be in [0, " + std::to_string(kMaxDistanceOrder) + "]");
  std::vector<std::int64_t> lambda(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 0; j <= n; ++j)
    for (int w = 0; w <= n; ++w) {
      const std::int64_t sign = 2 * w <= n ? 1 : -1;
      lambda[static_cast<std::size_t>(j)] += sign * krawtchouk(n, w, j);
    }
  return lambda;
}

double hamming_sigma(int n) {
  const auto lambda = distance_eigenvalues(n);
  if (std::llabs(lambda[0]) > binom(n, n / 2)) throw std::logic_error("hamming_sigma: lambda_0 exceeds central binomial");
  // Strings whose weight lies within one of n/2.
  std::int64_t central = 0;
  for (int w = 0; w <= n; ++w)
    if (2 * w >= n - 2 && 2 * w <= n + 2) central += binom(n, w);
  std::int64_t best = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (j > 0 && std::llabs(lambda[j]) > central)
      throw std::logic_error("hamming_sigma: |lambda_" + std::to_string(j) + "| exceeds central weight count");
    best = std::max(best, static_cast<std::int64_t>(std::llabs(lambda[j])));
  }
  return static_cast<double>(best);
}

BoundReport thm1_bound(double sigma1, std::size_t n, std::size_t r, int p) {
  if (n == 0) throw DomainError("thm1_bound: empty matrix");
  const auto& constants = lift_constants(p);
  BoundReport report;
  report.r = r;
  report.p = p;
  report.n = n;
  report.sigma1 = sigma1;
  report.c_base = constants.c;
  const double terms = std::pow(static_cast<double>(p), 3) + 1.0;
  report.c = constants.c * constants.c * terms;
  const double rd = static_cast<double>(r);
  report.rtilde = std::exp(rd * std::log(terms));
  const double nd = static_cast<double>(n);
  const double log_penalty = std::log(sigma1) + rd * std::log(report.c) - std::log(2.0 * nd);
  const double penalty = sigma1 == 0.0 ? 0.0 : std::exp(log_penalty);
  report.bound = nd * nd * (0.5 - penalty);
  if (std::isinf(penalty)) report.bound = -std::numeric_limits<double>::infinity();
  report.positive = report.bound > 0.0;
  return report;
}

BoundReport thm1_bound(const SignMatrix& a, std::size_t r, int p) {
  if (a.rows() != a.cols()) throw DomainError("thm1_bound: matrix must be square");
  return thm1_bound(largest_singular_value(a).sigma1, a.rows(), r, p);
}

KronConstants kron_lb_constants(const SignMatrix& a, int p) {
  const SigmaCheck check = sigma_lt_q_check(a);
  if (!check.strict) throw DomainError("sigma_1 = q, no valid c1 (matrix has rank 1)");
  const double q = static_cast<double>(a.rows());
  const double c = thm1_bound(check.sigma1, a.rows(), 0, p).c;
  if (c <= 1.0) throw std::logic_error("kron_lb_constants: lift constant must exceed 1");
  // c^{k/D} sigma1 / q <= 1 - 1e-6  <=>  k <= D * log((1 - 1e-6) q / sigma1) / log c.
  const double slack = std::log((1.0 - 1e-6) * q / check.sigma1) / std::log(c);
  for (std::uint64_t denominator = 64; denominator != 0 && denominator <= (std::uint64_t{1} << 60); denominator *= 2) {
    auto k = static_cast<std::uint64_t>(std::floor(static_cast<double>(denominator) * slack));
    // Guard the floor against rounding at the boundary.
    while (k > 0 && std::pow(c, static_cast<double>(k) / static_cast<double>(denominator)) * check.sigma1 / q > 1.0 - 1e-6) --k;
    if (k >= 1) {
      const double c1 = static_cast<double>(k) / static_cast<double>(denominator);
      return {c1, std::pow(c, c1) * check.sigma1 / q, k, denominator};
    }
  }
  throw DomainError("no valid c1 down to denominator 2^60");
}

}  // namespace rigidlab
