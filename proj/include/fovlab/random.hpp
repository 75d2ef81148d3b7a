#pragma once

// Seeded generators shared by the fixture builders and the samplers.
// Streams are derived from (seed, index) so that sample i never depends on
// how many samples were drawn before it.

#include <cstdint>
#include <random>

#include "fovlab/matcore.hpp"

namespace fovlab {

using Rng = std::mt19937_64;

inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

/// Standard complex Gaussian entries (real and imaginary parts N(0,1)).
inline Vector random_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    x(i) = Complex(re, im);
  }
  return x;
}

inline RealVector random_real_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector x(n);
  for (Index i = 0; i < n; ++i) x(i) = normal(rng);
  return x;
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) a.col(j) = random_vector(rows, rng);
  return a;
}

inline RealMatrix random_real_matrix(Index rows, Index cols, Rng& rng) {
  RealMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) a.col(j) = random_real_vector(rows, rng);
  return a;
}

/// Haar-distributed unitary: Q from QR of a Gaussian matrix with the phases
/// of diag(R) folded back into Q.
inline Matrix random_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0.0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

inline RealMatrix random_orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<RealMatrix> qr(random_real_matrix(n, n, rng));
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

}  // namespace fovlab
