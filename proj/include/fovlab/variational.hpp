#pragma once

// Extremal characterization of real spectra of nondefective, possibly
// non-Hermitian matrices through the constrained quotient
//   rho(y, x, A) = y*Ax / y*x,  y = (VV*)^{-1} x.
// Under z = V^{-1} x the quotient becomes z* Lambda z / z*z, so its extremes
// over a subspace S are eigenvalues of Q* Lambda Q with Q an orthonormal basis
// of V^{-1} S.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fovlab/random.hpp"
#include "fovlab/spectra.hpp"

namespace fovlab {

enum class Extremum { Max, Min };

inline constexpr double kRealSpectrumTol = 1e-10;

inline void require_real_spectrum(const EigenSystem& e, const char* who) {
  if (!is_real_spectrum(e, kRealSpectrumTol))
    throw Error(ErrorCode::ComplexSpectrum, std::string(who) + ": spectrum is not real");
}

/// tol = 1e-8 (1 + |lambda|)(1 + condV / 1e3)
inline double variational_tolerance(double lambda, double condV) {
  return 1e-8 * (1.0 + std::abs(lambda)) * (1.0 + condV / 1e3);
}

/// Exact max or min of the constrained quotient over x in span(basis).
inline double subspace_extremum(const EigenSystem& e, const Matrix& basis, Extremum which) {
  require_real_spectrum(e, "subspace_extremum");
  require_dim(basis.rows(), e.dim(), "subspace_extremum");
  if (basis.cols() == 0 || basis.cols() > e.dim())
    throw Error(ErrorCode::RankDeficientBasis, "subspace_extremum: basis has " +
                                                   std::to_string(basis.cols()) + " columns");
  const Matrix z = e.right_inverse() * basis;
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0)))
    throw Error(ErrorCode::RankDeficientBasis, "subspace_extremum: basis is rank deficient");
  const Matrix q = svd.matrixU();

  RealVector lambda(e.dim());
  for (Index i = 0; i < e.dim(); ++i) lambda(i) = e.value(i).real();
  const Matrix compressed = hermitian_part(q.adjoint() * lambda.cast<Complex>().asDiagonal() * q);
  Eigen::SelfAdjointEigenSolver<Matrix> es(compressed, Eigen::EigenvaluesOnly);
  return which == Extremum::Max ? es.eigenvalues()(es.eigenvalues().size() - 1)
                                : es.eigenvalues()(0);
}

/// Columns first..first+count-1 of V.
inline Matrix eigen_span(const EigenSystem& e, Index first, Index count) {
  return e.right().middleCols(first, count);
}

struct RitzExtrema {
  double lambdaMin = 0.0;
  double lambdaMax = 0.0;
  int samples = 0;
  int violations = 0;
  double worstExcess = 0.0;  // largest sandwich violation, relative to y*x
};

/// (lambda_1, lambda_n) as the extremes of the constrained quotient over the
/// whole space, with lambda_1 y*x <= y*Ax <= lambda_n y*x checked on seeded
/// samples y = Hx. Any violation beyond tolerance throws SandwichViolation.
inline RitzExtrema rayleigh_ritz_extrema(const Matrix& a, const EigenSystem& e, int nSamples,
                                         std::uint64_t seed) {
  require_square(a, "rayleigh_ritz_extrema");
  require_dim(e.dim(), a.rows(), "rayleigh_ritz_extrema");
  require_real_spectrum(e, "rayleigh_ritz_extrema");
  const Index n = e.dim();
  const Matrix full = Matrix::Identity(n, n);
  RitzExtrema r;
  r.lambdaMin = subspace_extremum(e, full, Extremum::Min);
  r.lambdaMax = subspace_extremum(e, full, Extremum::Max);
  r.samples = nSamples;

  const double tol =
      variational_tolerance(std::max(std::abs(r.lambdaMin), std::abs(r.lambdaMax)), e.cond());
  const Metric& m = e.metric();
  for (int i = 0; i < nSamples; ++i) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(i));
    const Vector x = random_vector(n, rng);
    const Vector y = m.h() * x;
    const double yx = y.dot(x).real();
    const double value = y.dot(a * x).real() / yx;
    const double excess = std::max(r.lambdaMin - value, value - r.lambdaMax);
    r.worstExcess = std::max(r.worstExcess, excess);
    if (excess > tol) ++r.violations;
  }
  if (r.violations > 0)
    throw Error(ErrorCode::SandwichViolation,
                std::to_string(r.violations) + " of " + std::to_string(nSamples) +
                    " samples leave [lambda_1, lambda_n] by up to " + std::to_string(r.worstExcess));
  return r;
}

enum class MinMaxDirection { MinMax, MaxMin };

struct MinMaxReport {
  Index j = 1;  // 1-based
  double lambdaJ = 0.0;
  std::vector<double> innerValues;
  double achievedAtEigenspan = 0.0;
  MinMaxDirection direction = MinMaxDirection::MinMax;
  double tol = 0.0;

  /// Worst crossing of lambdaJ by a sampled inner extremum (<= 0 is fine).
  double worst_crossing() const {
    double w = -std::numeric_limits<double>::infinity();
    for (double v : innerValues)
      w = std::max(w, direction == MinMaxDirection::MinMax ? lambdaJ - v : v - lambdaJ);
    return w;
  }

  bool passed() const {
    return worst_crossing() <= tol && std::abs(achievedAtEigenspan - lambdaJ) <= tol;
  }
};

struct CourantFischerReport {
  MinMaxReport minMax;  // min over j-dim S of max over S
  MinMaxReport maxMin;  // max over (n-j+1)-dim S of min over S
  bool passed() const { return minMax.passed() && maxMin.passed(); }
};

/// Seeded random subspaces (Gaussian columns in x-coordinates) never beat
/// lambda_j, and the eigen-spans attain it.
inline CourantFischerReport courant_fischer_verify(const Matrix& a, const EigenSystem& e, Index j,
                                                   int trials, std::uint64_t seed) {
  require_square(a, "courant_fischer_verify");
  require_dim(e.dim(), a.rows(), "courant_fischer_verify");
  require_real_spectrum(e, "courant_fischer_verify");
  const Index n = e.dim();
  if (j < 1 || j > n)
    throw Error(ErrorCode::InvalidArgument, "courant_fischer_verify: j out of range");

  const double lambdaJ = e.value(j - 1).real();
  const double tol = variational_tolerance(lambdaJ, e.cond());

  CourantFischerReport rep;
  rep.minMax.j = rep.maxMin.j = j;
  rep.minMax.lambdaJ = rep.maxMin.lambdaJ = lambdaJ;
  rep.minMax.tol = rep.maxMin.tol = tol;
  rep.minMax.direction = MinMaxDirection::MinMax;
  rep.maxMin.direction = MinMaxDirection::MaxMin;

  const Index upDim = n - j + 1;
  for (int t = 0; t < trials; ++t) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(t));
    Eigen::HouseholderQR<Matrix> qrA(random_matrix(n, j, rng));
    const Matrix sj = qrA.householderQ() * Matrix::Identity(n, j);
    rep.minMax.innerValues.push_back(subspace_extremum(e, sj, Extremum::Max));
    Eigen::HouseholderQR<Matrix> qrB(random_matrix(n, upDim, rng));
    const Matrix su = qrB.householderQ() * Matrix::Identity(n, upDim);
    rep.maxMin.innerValues.push_back(subspace_extremum(e, su, Extremum::Min));
  }
  rep.minMax.achievedAtEigenspan = subspace_extremum(e, eigen_span(e, 0, j), Extremum::Max);
  rep.maxMin.achievedAtEigenspan =
      subspace_extremum(e, eigen_span(e, j - 1, upDim), Extremum::Min);
  return rep;
}

}  // namespace fovlab
