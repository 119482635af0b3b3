#pragma once
// Singular values of sign matrices, the exact spectrum of the distance matrix
// M_n, and the singular-value rigidity lower bound.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rigidlab/matrix.hpp"

namespace rigidlab {

enum class SpectralMethod { PowerIteration, ClosedForm, ExactGram };

std::string to_string(SpectralMethod m);

struct SpectralReport {
  double sigma1 = 0.0;
  SpectralMethod method = SpectralMethod::PowerIteration;
  int iterations = 0;
  double residual = 0.0;  // relative change of the Rayleigh quotient at the last step
  bool converged = false;
  bool restarted = false;  // the all-ones start stagnated and e_0 was tried
};

struct PowerIterationOptions {
  double tolerance = 1e-12;
  int max_iterations = 10'000;
};

/// Power iteration on A^T A from the all-ones vector.
SpectralReport largest_singular_value(const SignMatrix& a, const PowerIterationOptions& options = {});

/// sigma_1(A)^n, which equals sigma_1 of the n-th Kronecker power.
double kron_sigma(const SignMatrix& a, int n);

struct SigmaCheck {
  double sigma1;
  bool strict;  // sigma1 < q - 1e-9
};

/// For a square q x q sign matrix: sigma_1 < q exactly when rank > 1.
/// Throws std::logic_error if the numerical rank disagrees with the flag.
SigmaCheck sigma_lt_q_check(const SignMatrix& a);

inline constexpr int kMaxDistanceOrder = 24;

/// Eigenvalues of M_n indexed by the weight |y| of the eigenvector
/// v_y[x] = (-1)^<y,x>, via Krawtchouk sums. Exact.
std::vector<std::int64_t> distance_eigenvalues(int n);

/// Krawtchouk value K_w(j) = sum_i (-1)^i binom(j, i) binom(n - j, w - i).
std::int64_t krawtchouk(int n, int w, int j);

/// max |lambda| over weights. Also checks the central-binomial bounds on
/// lambda_0 and on lambda_y for y != 0, throwing std::logic_error on failure.
double hamming_sigma(int n);

struct BoundReport {
  std::size_t r = 0;
  int p = 0;
  std::size_t n = 0;      // matrix dimension N
  double sigma1 = 0.0;
  double c_base = 0.0;    // C = C_f * C_g^p
  double c = 0.0;         // C^2 (p^3 + 1)
  double rtilde = 0.0;    // (p^3 + 1)^r
  double bound = 0.0;     // N^2 (1/2 - sigma1 * c^r / (2N))
  bool positive = false;
};

/// Rigidity lower bound for an N x N sign matrix with top singular value
/// sigma1. Evaluated in log space; huge c^r yields -inf.
BoundReport thm1_bound(double sigma1, std::size_t n, std::size_t r, int p);
BoundReport thm1_bound(const SignMatrix& a, std::size_t r, int p);

struct KronConstants {
  double c1;
  double c2;           // c^{c1} sigma1 / q < 1
  std::uint64_t k;     // c1 = k / denominator
  std::uint64_t denominator;
};

/// Largest c1 = k / 64 with c^{c1} sigma1 / q <= 1 - 1e-6. When no k >= 1
/// qualifies at 64, the denominator doubles until one does.
/// Throws DomainError for rank-1 input.
KronConstants kron_lb_constants(const SignMatrix& a, int p);

}  // namespace rigidlab
