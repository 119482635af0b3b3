#pragma once
// Shared fixtures for the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "rigidlab/matrix.hpp"

namespace testsupport {

inline rigidlab::SignMatrix random_sign(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  rigidlab::SignMatrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) s.set(i, j, (rng() & 1U) ? -1 : 1);
  return s;
}

inline rigidlab::FpMatrix random_fp(std::size_t rows, std::size_t cols, int p, std::mt19937_64& rng) {
  rigidlab::FpMatrix m(rows, cols, p);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<std::int64_t>(rng() % static_cast<unsigned>(p)));
  return m;
}

inline rigidlab::LowRankFp random_lowrank(std::size_t r, std::size_t n, int p, std::mt19937_64& rng) {
  return {random_fp(r, n, p, rng), random_fp(r, n, p, rng)};
}

/// Sign matrix from a row-major list of +1/-1 values.
inline rigidlab::SignMatrix signs(std::size_t rows, std::size_t cols, std::vector<int> values) {
  return rigidlab::SignMatrix::from_values(rows, cols, values);
}

/// All 2^(rows*cols) sign matrices of the given shape, by bit pattern.
inline std::vector<rigidlab::SignMatrix> all_sign_matrices(std::size_t rows, std::size_t cols) {
  std::vector<rigidlab::SignMatrix> out;
  const std::size_t cells = rows * cols;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    rigidlab::SignMatrix s(rows, cols);
    for (std::size_t c = 0; c < cells; ++c)
      if ((mask >> c) & 1U) s.set(c / cols, c % cols, -1);
    out.push_back(s);
  }
  return out;
}

}  // namespace testsupport
