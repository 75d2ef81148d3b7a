#pragma once

// Eigendecomposition A = V diag(lambda) V^{-1} with left eigenvectors taken
// from the rows of V^{-1}, plus generators of test matrices with a prescribed
// spectrum and eigenbasis conditioning.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "fovlab/matcore.hpp"
#include "fovlab/random.hpp"
#include "fovlab/refine.hpp"

namespace fovlab {

inline constexpr double kEigTol = 1e-10;

/// max(1, max |lambda_i|): the unit in which spectral tolerances are quoted.
inline double spectral_scale(std::span<const Complex> lambda) {
  double s = 1.0;
  for (const Complex& z : lambda) s = std::max(s, std::abs(z));
  return s;
}

namespace detail {

/// Real part ascending, imaginary part ascending. Real parts closer than
/// `tol` (chained) count as equal so that conjugate pairs order by their
/// imaginary parts regardless of roundoff in the real parts.
inline std::vector<Index> spectral_order(std::span<const Complex> lambda, double tol) {
  std::vector<Index> idx(lambda.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (lambda[a].real() != lambda[b].real()) return lambda[a].real() < lambda[b].real();
    return lambda[a].imag() < lambda[b].imag();
  });
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t stop = start + 1;
    while (stop < idx.size() &&
           lambda[idx[stop]].real() - lambda[idx[stop - 1]].real() <= tol)
      ++stop;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(stop),
                     [&](Index a, Index b) { return lambda[a].imag() < lambda[b].imag(); });
    start = stop;
  }
  return idx;
}

/// Unit 2-norm; the first entry with modulus above 1/sqrt(n) made real positive.
inline void normalize_column(Eigen::Ref<Vector> v) {
  const double nrm = v.norm();
  if (nrm == 0.0) return;
  v /= nrm;
  const double threshold = (1.0 - 1e-8) / std::sqrt(static_cast<double>(v.size()));
  for (Index k = 0; k < v.size(); ++k) {
    const double mod = std::abs(v(k));
    if (mod > threshold) {
      v *= std::conj(v(k)) / mod;
      v(k) = Complex(v(k).real(), 0.0);
      return;
    }
  }
}

}  // namespace detail

/// Diagonalization of a nondefective matrix. Immutable once built.
class EigenSystem {
 public:
  /// Builds the system from eigenvalues and matching right eigenvector
  /// columns. V^{-1} comes from an LU solve against V.
  EigenSystem(std::vector<Complex> lambda, Matrix v, double condLimit = kCondLimit)
      : lambda_(std::move(lambda)), v_(std::move(v)), metric_(Metric::identity(1)) {
    require_square(v_, "EigenSystem");
    require_dim(static_cast<Index>(lambda_.size()), v_.rows(), "EigenSystem");
    condV_ = condition_number(v_);
    if (!(condV_ <= condLimit))
      throw Error(ErrorCode::DefectiveMatrix, "eigenvector basis condition " +
                                                  std::to_string(condV_) + " exceeds limit " +
                                                  std::to_string(condLimit));
    const Index n = v_.rows();
    vInv_ = v_.fullPivLu().solve(Matrix::Identity(n, n));
    metric_ = Metric::from_basis(v_, condLimit);
  }

  Index dim() const { return v_.rows(); }
  const std::vector<Complex>& values() const { return lambda_; }
  Complex value(Index i) const { return lambda_[static_cast<std::size_t>(i)]; }
  const Matrix& right() const { return v_; }
  const Matrix& right_inverse() const { return vInv_; }
  double cond() const { return condV_; }
  const Metric& metric() const { return metric_; }

  Vector lambda_vector() const {
    Vector l(dim());
    for (Index i = 0; i < dim(); ++i) l(i) = value(i);
    return l;
  }

  /// V diag(lambda) V^{-1}
  Matrix reconstruct() const { return v_ * lambda_vector().asDiagonal() * vInv_; }

  /// Same basis, eigenvalues shifted by -mu: the system of A - mu I.
  EigenSystem shifted(Complex mu) const {
    EigenSystem copy = *this;
    for (Complex& l : copy.lambda_) l -= mu;
    return copy;
  }

  /// Same basis, eigenvalues scaled by alpha: the system of alpha A.
  EigenSystem scaled(Complex alpha) const {
    EigenSystem copy = *this;
    for (Complex& l : copy.lambda_) l *= alpha;
    return copy;
  }

 private:
  std::vector<Complex> lambda_;
  Matrix v_;
  Matrix vInv_;
  double condV_ = 1.0;
  Metric metric_;
};

struct EigenPair {
  Complex value;
  Vector right;
  Vector left;
};

/// Columns of (V^{-1})*. Column i is w with w* A = lambda_i w* and VV* w = v_i.
inline Matrix left_eigenvectors(const EigenSystem& e) { return e.right_inverse().adjoint(); }

inline EigenPair eigen_pair(const EigenSystem& e, Index i) {
  return EigenPair{e.value(i), e.right().col(i), e.right_inverse().row(i).adjoint()};
}

/// Eigenvalues only, in the same order as eig(); works for defective A.
inline std::vector<Complex> eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  Eigen::ComplexEigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "complex eigensolver did not converge");
  std::vector<Complex> raw(solver.eigenvalues().begin(), solver.eigenvalues().end());
  const auto order = detail::spectral_order(raw, 1e-8 * spectral_scale(raw));
  std::vector<Complex> out;
  for (Index k : order) out.push_back(raw[static_cast<std::size_t>(k)]);
  return out;
}

/// Full eigendecomposition with sorted eigenvalues and phase-fixed unit
/// eigenvectors. Clusters of (numerically) repeated eigenvalues get an
/// orthonormal basis of the near-null space of A - mu I.
inline EigenSystem eig(const Matrix& a, double condLimit = kCondLimit) {
  require_square(a, "eig");
  const Index n = a.rows();
  Eigen::ComplexEigenSolver<Matrix> solver(a, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "complex eigensolver did not converge");

  std::vector<Complex> raw(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  const double scale = spectral_scale(raw);

  // Isolated eigenvalues are refined against A itself; clustered ones are
  // left to the null-space treatment below.
  {
    const std::vector<Complex> approx = raw;
    for (Index i = 0; i < n; ++i) {
      double gap = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < n; ++j)
        if (j != i)
          gap = std::min(gap, std::abs(approx[static_cast<std::size_t>(i)] -
                                       approx[static_cast<std::size_t>(j)]));
      if (gap <= 1e-8 * scale) continue;
      raw[static_cast<std::size_t>(i)] = detail::refine_eigenvalue(
          a, approx[static_cast<std::size_t>(i)], solver.eigenvectors().col(i),
          std::isfinite(gap) ? 0.5 * gap : scale);
    }
  }
  const auto order = detail::spectral_order(raw, 1e-8 * scale);

  std::vector<Complex> lambda(static_cast<std::size_t>(n));
  Matrix v(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    lambda[static_cast<std::size_t>(k)] = raw[static_cast<std::size_t>(src)];
    v.col(k) = solver.eigenvectors().col(src);
  }

  // Union clusters of eigenvalues within 1e-8 * scale of each other.
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)]) <=
          1e-8 * scale) {
        const Index ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
  for (Index root = 0; root < n; ++root) {
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i)
      if (find(i) == root) members.push_back(i);
    if (members.size() < 2) continue;
    Complex mu = 0.0;
    for (Index i : members) mu += lambda[static_cast<std::size_t>(i)];
    mu /= static_cast<double>(members.size());
    const Matrix shifted = a - mu * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const Index k = static_cast<Index>(members.size());
    // A defective cluster has a near-null space of dimension < k; keep the
    // solver's (nearly parallel) vectors so the condition check rejects it.
    if (svd.singularValues()(n - k) > 1e-8 * std::max(1.0, a.norm())) continue;
    for (Index c = 0; c < k; ++c) v.col(members[static_cast<std::size_t>(c)]) = svd.matrixV().col(n - k + c);
  }

  for (Index k = 0; k < n; ++k) detail::normalize_column(v.col(k));
  return EigenSystem(std::move(lambda), std::move(v), condLimit);
}

/// max |Im lambda_i| <= tol * max(1, max |lambda_i|)
inline bool is_real_spectrum(const EigenSystem& e, double tol) {
  double worst = 0.0;
  for (const Complex& l : e.values()) worst = std::max(worst, std::abs(l.imag()));
  return worst <= tol * spectral_scale(e.values());
}

/// Largest residual ||A v_i - lambda_i v_i|| relative to ||A||_F.
inline double eigen_residual(const Matrix& a, const EigenSystem& e) {
  const Matrix r = a * e.right() - e.right() * e.lambda_vector().asDiagonal();
  return r.norm() / std::max(a.norm(), 1e-300);
}

/// A = V diag(spectrum) V^{-1} with V = Q1 S Q2*, Q1 and Q2 seeded Haar
/// unitaries and S geometric from 1 to condTarget, so cond(V) = condTarget.
/// With realBasis the factors are real orthogonal and the spectrum must be
/// real, which yields a real matrix.
inline Matrix gen_prescribed(std::span<const Complex> spectrum, double condTarget,
                             std::uint64_t seed, bool realBasis = false) {
  if (spectrum.empty()) throw Error(ErrorCode::EmptyInput, "gen_prescribed: empty spectrum");
  if (!(condTarget >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "gen_prescribed: condTarget must be >= 1");
  const Index n = static_cast<Index>(spectrum.size());
  Rng rng = derived_rng(seed, 0);

  Matrix q1, q2;
  if (realBasis) {
    for (const Complex& l : spectrum)
      if (l.imag() != 0.0)
        throw Error(ErrorCode::InvalidArgument, "gen_prescribed: real basis needs a real spectrum");
    q1 = random_orthogonal(n, rng).cast<Complex>();
    q2 = random_orthogonal(n, rng).cast<Complex>();
  } else {
    q1 = random_unitary(n, rng);
    q2 = random_unitary(n, rng);
  }
  RealVector sigma(n);
  for (Index k = 0; k < n; ++k)
    sigma(k) = n == 1 ? 1.0
                      : std::pow(condTarget, static_cast<double>(k) / static_cast<double>(n - 1));

  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = spectrum[static_cast<std::size_t>(i)];

  // V Lambda V^{-1} = Q1 S (Q2* Lambda Q2) S^{-1} Q1*
  Matrix core = q2.adjoint() * lambda.asDiagonal() * q2;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) core(i, j) *= sigma(i) / sigma(j);
  Matrix a = q1 * core * q1.adjoint();
  if (realBasis) a = a.real().cast<Complex>();
  return a;
}

inline Matrix gen_prescribed(std::initializer_list<Complex> spectrum, double condTarget,
                             std::uint64_t seed, bool realBasis = false) {
  return gen_prescribed(std::span<const Complex>(spectrum.begin(), spectrum.size()), condTarget,
                        seed, realBasis);
}

/// Normal matrix U diag(spectrum) U* with a seeded Haar unitary U.
inline Matrix gen_normal(std::span<const Complex> spectrum, std::uint64_t seed) {
  return gen_prescribed(spectrum, 1.0, seed);
}

inline Matrix gen_normal(std::initializer_list<Complex> spectrum, std::uint64_t seed) {
  return gen_prescribed(spectrum, 1.0, seed);
}

}  // namespace fovlab
