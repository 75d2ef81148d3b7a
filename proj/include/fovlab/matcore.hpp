#pragma once

// Dense complex matrix helpers and the H-inner product.
//
// Conventions: y*x = sum conj(y_i) x_i, so inner products are conjugate-linear
// in the left factor. A Metric H is always kept together with an upper
// triangular factor C such that H = C*C; H-norms and Givens transforms go
// through C.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "fovlab/error.hpp"

namespace fovlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kFactorTol = 1e-12;
inline constexpr double kCondLimit = 1e8;

inline bool all_finite(const Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

/// Square, nonempty and finite. Throws NonSquare / InvalidArgument otherwise.
inline void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorCode::NonSquare, std::string(who) + ": matrix is " +
                                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (!all_finite(a))
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": matrix has non-finite entries");
}

inline void require_dim(Index got, Index want, const char* who) {
  if (got != want)
    throw Error(ErrorCode::DimensionMismatch, std::string(who) + ": expected dimension " +
                                                  std::to_string(want) + ", got " +
                                                  std::to_string(got));
}

/// (A + A*)/2, with conjugate symmetry enforced entrywise.
inline Matrix hermitian_part(const Matrix& a) {
  require_square(a, "hermitian_part");
  const Index n = a.rows();
  Matrix h(n, n);
  for (Index j = 0; j < n; ++j) {
    h(j, j) = Complex(a(j, j).real(), 0.0);
    for (Index i = j + 1; i < n; ++i) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

/// ||AA* - A*A||_F <= tol * ||A||_F^2
inline bool is_normal(const Matrix& a, double tol) {
  require_square(a, "is_normal");
  const Matrix comm = a * a.adjoint() - a.adjoint() * a;
  const double fro = a.norm();
  return comm.norm() <= tol * fro * fro;
}

inline bool is_hermitian(const Matrix& a, double relTol = kHermTol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= relTol * std::max(a.norm(), 1e-300);
}

/// 2-norm condition number from the singular values; infinity when singular.
inline double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Largest singular value.
inline double norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

/// A Hermitian positive definite matrix H together with its factor C
/// (upper triangular, H = C*C).
class Metric {
 public:
  /// H = (VV*)^{-1}. VV* is factored as U U* with U upper triangular and
  /// C = U^{-1} is obtained by a triangular solve, so H is never inverted
  /// from a dense matrix.
  static Metric from_basis(const Matrix& v, double condLimit = kCondLimit) {
    require_square(v, "metric_from_basis");
    const double condV = condition_number(v);
    if (!(condV <= condLimit))
      throw Error(ErrorCode::SingularBasis, "basis condition estimate " + std::to_string(condV) +
                                                " exceeds limit " + std::to_string(condLimit));
    const Index n = v.rows();
    Matrix gram = v * v.adjoint();
    gram = hermitian_part(gram);
    // Reverse-order Cholesky: P G P = L L*  =>  G = U U* with U = P L P upper.
    const Matrix flipped = gram.reverse();
    Eigen::LLT<Matrix> llt(flipped);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::SingularBasis, "VV* is not numerically positive definite");
    const Matrix lower = llt.matrixL();
    const Matrix upper = lower.reverse();
    Matrix factor = upper.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
    factor.triangularView<Eigen::StrictlyLower>().setZero();
    Matrix h = hermitian_part(factor.adjoint() * factor);
    return Metric(std::move(h), std::move(factor), condV * condV);
  }

  /// Wraps a caller-supplied HPD matrix; C = L* from its Cholesky factor.
  static Metric from_hpd(const Matrix& h) {
    require_square(h, "Metric::from_hpd");
    if (!is_hermitian(h, kHermTol))
      throw Error(ErrorCode::InvalidArgument, "metric matrix is not Hermitian");
    Matrix hh = hermitian_part(h);
    Eigen::LLT<Matrix> llt(hh);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::InvalidArgument, "metric matrix is not positive definite");
    Matrix factor = llt.matrixU();
    const double condC = condition_number(factor);
    return Metric(std::move(hh), std::move(factor), condC * condC);
  }

  static Metric identity(Index n) {
    return Metric(Matrix::Identity(n, n), Matrix::Identity(n, n), 1.0);
  }

  Index dim() const { return h_.rows(); }
  const Matrix& h() const { return h_; }
  const Matrix& factor() const { return factor_; }
  double condition_estimate() const { return conditionEstimate_; }

  /// ||C*C - H||_F / ||H||_F
  double factor_residual() const {
    return (factor_.adjoint() * factor_ - h_).norm() / std::max(h_.norm(), 1e-300);
  }

  /// Solves H x = b through the factor.
  Vector solve(const Vector& b) const {
    require_dim(b.size(), dim(), "Metric::solve");
    const Vector w = factor_.adjoint().triangularView<Eigen::Lower>().solve(b);
    return factor_.triangularView<Eigen::Upper>().solve(w);
  }

 private:
  Metric(Matrix h, Matrix factor, double cond)
      : h_(std::move(h)), factor_(std::move(factor)), conditionEstimate_(cond) {}

  Matrix h_;
  Matrix factor_;
  double conditionEstimate_;
};

inline Metric metric_from_basis(const Matrix& v, double condLimit = kCondLimit) {
  return Metric::from_basis(v, condLimit);
}

/// <x, y>_H = y* H x
inline Complex h_inner(const Vector& x, const Vector& y, const Metric& m) {
  require_dim(x.size(), m.dim(), "h_inner");
  require_dim(y.size(), m.dim(), "h_inner");
  const Vector cx = m.factor() * x;
  const Vector cy = m.factor() * y;
  return cy.dot(cx);  // Eigen's dot conjugates the left operand
}

inline double h_norm(const Vector& x, const Metric& m) {
  require_dim(x.size(), m.dim(), "h_norm");
  return (m.factor() * x).norm();
}

}  // namespace fovlab
