#pragma once

// Rayleigh quotient variants:
//   rq        x*Ax / x*x
//   rq_naive  y*Ax / y*x           (unconstrained two-sided, unbounded)
//   rq_gen    y*Ax / y*Mx, y = Hx  (constrained two-sided, H = (VV*)^{-1})
// and grid / finite-difference checks of their extremal properties.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fovlab/spectra.hpp"

namespace fovlab {

inline constexpr double kDegeneratePairTol = 1e-14;

inline void require_nonzero(const Vector& x, const char* who) {
  if (x.size() == 0 || x.norm() == 0.0)
    throw Error(ErrorCode::ZeroVector, std::string(who) + ": zero vector");
}

inline Complex rq(const Vector& x, const Matrix& a) {
  require_square(a, "rq");
  require_dim(x.size(), a.rows(), "rq");
  require_nonzero(x, "rq");
  return x.dot(a * x) / x.squaredNorm();
}

inline Complex rq_naive(const Vector& y, const Vector& x, const Matrix& a) {
  require_square(a, "rq_naive");
  require_dim(x.size(), a.rows(), "rq_naive");
  require_dim(y.size(), a.rows(), "rq_naive");
  const Complex yx = y.dot(x);
  if (!(std::abs(yx) > kDegeneratePairTol * x.norm() * y.norm()))
    throw Error(ErrorCode::DegeneratePair, "rq_naive: y*x vanishes");
  return y.dot(a * x) / yx;
}

struct RqReport {
  Complex value;
  Vector x;
  Vector y;
  Vector residualRight;  // A x - rho x
  Vector residualLeft;   // A* y - conj(rho) y
  double hResidualNorm = 0.0;
  double constraintGap = 0.0;  // ||y - Hx|| / ||y||
};

/// Generalized two-sided quotient. y = Hx with H from the eigensystem, x
/// rescaled so that y*Mx = 1. M defaults to I; a supplied M must make HM
/// Hermitian positive definite.
inline RqReport rq_gen(const Vector& x, const Matrix& a, const EigenSystem& e,
                       const std::optional<Matrix>& m = std::nullopt) {
  require_square(a, "rq_gen");
  require_dim(x.size(), a.rows(), "rq_gen");
  require_dim(e.dim(), a.rows(), "rq_gen");
  require_nonzero(x, "rq_gen");
  const Metric& metric = e.metric();
  const Index n = a.rows();

  if (m) {
    require_dim(m->rows(), n, "rq_gen");
    require_dim(m->cols(), n, "rq_gen");
    const Matrix hm = metric.h() * *m;
    if (!is_hermitian(hm, 1e-10))
      throw Error(ErrorCode::InvalidM, "rq_gen: H M is not Hermitian");
    Eigen::LLT<Matrix> llt(hermitian_part(hm));
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::InvalidM, "rq_gen: H M is not positive definite");
  }

  RqReport rep;
  rep.x = x;
  // y*Mx = x* H M x is real and positive for admissible M.
  const Vector mx0 = m ? Vector(*m * x) : x;
  const double denom0 = (metric.h() * x).dot(mx0).real();
  if (!(denom0 > 0.0)) throw Error(ErrorCode::DegeneratePair, "rq_gen: y*Mx is not positive");
  rep.x /= std::sqrt(denom0);
  rep.y = metric.h() * rep.x;

  const Vector ax = a * rep.x;
  const Vector mx = m ? Vector(*m * rep.x) : rep.x;
  rep.value = rep.y.dot(ax) / rep.y.dot(mx);
  rep.residualRight = ax - rep.value * rep.x;
  rep.residualLeft = a.adjoint() * rep.y - std::conj(rep.value) * rep.y;
  rep.hResidualNorm = h_norm(rep.residualRight, metric);
  rep.constraintGap = (rep.y - metric.h() * rep.x).norm() / rep.y.norm();
  return rep;
}

/// (A x - mu x, A* y - conj(mu) y)
inline std::pair<Vector, Vector> residuals(const Vector& y, const Vector& x, Complex mu,
                                           const Matrix& a) {
  require_square(a, "residuals");
  require_dim(x.size(), a.rows(), "residuals");
  require_dim(y.size(), a.rows(), "residuals");
  return {a * x - mu * x, a.adjoint() * y - std::conj(mu) * y};
}

// ---------------------------------------------------------------------------
// Grids

/// Center plus `rings` concentric rings of `perRing` points out to `radius`.
/// The default 8 x 25 gives 201 points.
inline std::vector<Complex> disk_grid(Complex center, double radius, int rings = 8,
                                      int perRing = 25) {
  std::vector<Complex> g{center};
  for (int r = 1; r <= rings; ++r)
    for (int k = 0; k < perRing; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5 * (r % 2)) / perRing;
      g.push_back(center + std::polar(radius * r / rings, t));
    }
  return g;
}

/// `count` equispaced points on [center - radius, center + radius].
inline std::vector<double> line_grid(double center, double radius, int count = 201) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    g.push_back(center - radius + 2.0 * radius * k / std::max(1, count - 1));
  return g;
}

inline double default_grid_radius(Complex rho) { return 2.0 * std::max(std::abs(rho), 1.0); }

// ---------------------------------------------------------------------------
// Minimal residual in the H-norm

struct MinResidualForm {
  Complex rho;           // minimizer of the quadratic form
  double worstGap = 0;   // min over grid of lhs - rhs (must be >= -tol)
  double gapAtRho = 0;   // lhs(rho) - rhs (must be <= tol)
  Index gridArgmin = 0;  // grid index minimizing lhs
  Index nearestToRho = 0;
  bool passed = false;
};

struct MinResidualReport {
  MinResidualForm right;  // ||Au - mu u||_H
  MinResidualForm left;   // ||A*v - conj(mu) v||_{H^{-1}}, v = Hu
  double tol = 0.0;
  bool passed() const { return right.passed && left.passed; }
};

namespace detail {

// f(mu) = c - 2 Re(conj(mu) b) + |mu|^2 d; minimized at mu = b / d.
inline MinResidualForm quadratic_form_check(std::span<const Complex> grid, double c, Complex b,
                                            double d, const auto& direct, double tol) {
  MinResidualForm f;
  f.rho = b / d;
  const double bound = c - std::norm(f.rho) * d;
  f.worstGap = std::numeric_limits<double>::infinity();
  double bestLhs = std::numeric_limits<double>::infinity();
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lhs = direct(grid[k]);
    f.worstGap = std::min(f.worstGap, lhs - bound);
    if (lhs < bestLhs) {
      bestLhs = lhs;
      f.gridArgmin = static_cast<Index>(k);
    }
    const double dist = std::abs(grid[k] - f.rho);
    if (dist < bestDist) {
      bestDist = dist;
      f.nearestToRho = static_cast<Index>(k);
    }
  }
  f.gapAtRho = direct(f.rho) - bound;
  f.passed = f.worstGap >= -tol && std::abs(f.gapAtRho) <= tol && f.gridArgmin == f.nearestToRho;
  return f;
}

}  // namespace detail

/// Checks ||Au - mu u||_H^2 >= ||Au||_H^2 - |rho_H|^2 ||u||_H^2 on the grid,
/// with equality at rho_H = u*HAu / u*Hu, plus the mirrored left form for
/// v = Hu in the dual metric H^{-1} = VV*, whose minimizer is the same rho_H.
/// Both sides are evaluated directly from residual vectors; u is scaled to
/// unit H-norm first.
inline MinResidualReport min_residual_check(const Vector& u, const Matrix& a, const EigenSystem& e,
                                            std::span<const Complex> muGrid) {
  require_square(a, "min_residual_check");
  require_dim(u.size(), a.rows(), "min_residual_check");
  require_nonzero(u, "min_residual_check");
  const Metric& m = e.metric();
  const Vector un = u / h_norm(u, m);
  const Vector au = a * un;

  MinResidualReport rep;
  {
    const double c = std::pow(h_norm(au, m), 2);
    const Complex b = (m.h() * un).dot(au);  // u*HAu
    const double d = 1.0;                    // ||u||_H^2
    rep.tol = 1e-10 * std::max(1.0, c);
    auto direct = [&](Complex mu) { return std::pow(h_norm(au - mu * un, m), 2); };
    rep.right = detail::quadratic_form_check(muGrid, c, b, d, direct, rep.tol);
  }
  {
    // Dual metric: ||w||^2_{H^{-1}} = ||V* w||^2.
    const Matrix& v = e.right();
    const Vector vv = m.h() * un;
    const Vector avv = a.adjoint() * vv;
    auto dualNorm2 = [&](const Vector& w) { return (v.adjoint() * w).squaredNorm(); };
    const double c = dualNorm2(avv);
    const Complex b = (v.adjoint() * avv).dot(v.adjoint() * vv);  // v* A H^{-1} v
    const double d = dualNorm2(vv);
    const double tolLeft = 1e-10 * std::max(1.0, c);
    rep.tol = std::max(rep.tol, tolLeft);
    auto direct = [&](Complex mu) { return dualNorm2(avv - std::conj(mu) * vv); };
    rep.left = detail::quadratic_form_check(muGrid, c, b, d, direct, tolLeft);
  }
  return rep;
}

inline MinResidualReport min_residual_check(const Vector& u, const Matrix& a, const EigenSystem& e) {
  const Vector un = u / h_norm(u, e.metric());
  const Complex rho = (e.metric().h() * un).dot(a * un);
  const auto grid = disk_grid(rho, default_grid_radius(rho));
  return min_residual_check(u, a, e, grid);
}

// ---------------------------------------------------------------------------
// Minimal inner product for real matrices

struct MinInnerProductReport {
  double rho = 0.0;     // y^T A x / y^T x
  double worstGap = 0;  // min over grid of lhs - rhs
  double gapAtRho = 0;
  Index gridArgmin = 0;
  Index nearestToRho = 0;
  double tol = 0.0;
  bool flippedY = false;  // y was replaced by -y to make y^T x > 0
  bool passed = false;
};

/// For real A, x, y: (y^T A - mu y^T)(Ax - mu x) >= y^T A^2 x - rho^2 y^T x
/// on the grid, with equality at mu = rho. The inequality needs y^T x > 0;
/// y is negated when necessary (rho is invariant under y -> -y). x and y are
/// scaled to unit length first.
inline MinInnerProductReport min_inner_product_check(const RealVector& y, const RealVector& x,
                                                     const RealMatrix& a,
                                                     std::span<const double> muGrid) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorCode::NonSquare, "min_inner_product_check: matrix is not square");
  require_dim(x.size(), a.rows(), "min_inner_product_check");
  require_dim(y.size(), a.rows(), "min_inner_product_check");
  if (x.norm() == 0.0 || y.norm() == 0.0)
    throw Error(ErrorCode::ZeroVector, "min_inner_product_check: zero vector");
  const RealVector xn = x / x.norm();
  RealVector yn = y / y.norm();
  MinInnerProductReport rep;
  double yx = yn.dot(xn);
  if (!(std::abs(yx) > kDegeneratePairTol))
    throw Error(ErrorCode::DegeneratePair, "min_inner_product_check: y^T x vanishes");
  if (yx < 0.0) {
    yn = -yn;
    yx = -yx;
    rep.flippedY = true;
  }
  const RealVector ax = a * xn;
  const RealVector aty = a.transpose() * yn;
  rep.rho = yn.dot(ax) / yx;
  const double rhs = yn.dot(a * ax) - rep.rho * rep.rho * yx;
  const double anorm = a.norm();
  rep.tol = 1e-10 * std::max(1.0, anorm * anorm);
  auto lhs = [&](double mu) { return (aty - mu * yn).dot(ax - mu * xn); };

  rep.worstGap = std::numeric_limits<double>::infinity();
  double bestLhs = std::numeric_limits<double>::infinity();
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < muGrid.size(); ++k) {
    const double v = lhs(muGrid[k]);
    rep.worstGap = std::min(rep.worstGap, v - rhs);
    if (v < bestLhs) {
      bestLhs = v;
      rep.gridArgmin = static_cast<Index>(k);
    }
    const double dist = std::abs(muGrid[k] - rep.rho);
    if (dist < bestDist) {
      bestDist = dist;
      rep.nearestToRho = static_cast<Index>(k);
    }
  }
  rep.gapAtRho = lhs(rep.rho) - rhs;
  rep.passed = rep.worstGap >= -rep.tol && std::abs(rep.gapAtRho) <= rep.tol &&
               rep.gridArgmin == rep.nearestToRho;
  return rep;
}

inline MinInnerProductReport min_inner_product_check(const RealVector& y, const RealVector& x,
                                                     const RealMatrix& a) {
  const double yx = y.dot(x);
  if (!(std::abs(yx) > kDegeneratePairTol * x.norm() * y.norm()))
    throw Error(ErrorCode::DegeneratePair, "min_inner_product_check: y^T x vanishes");
  const double rho = y.dot(a * x) / yx;
  const auto grid = line_grid(rho, default_grid_radius(rho));
  return min_inner_product_check(y, x, a, grid);
}

// ---------------------------------------------------------------------------
// Stationarity

/// Largest central finite-difference slope of y*Ax / y*x over the 4n real
/// coordinate directions (real and imaginary parts of x and of y), with step
/// h. Vanishes to O(h^2) at left/right eigenpairs.
inline double stationarity_gradient(const Vector& y, const Vector& x, const Matrix& a, double h) {
  require_square(a, "stationarity_gradient");
  require_dim(x.size(), a.rows(), "stationarity_gradient");
  require_dim(y.size(), a.rows(), "stationarity_gradient");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "stationarity_gradient: h must be > 0");
  rq_naive(y, x, a);  // throws DegeneratePair

  const Index n = a.rows();
  double worst = 0.0;
  auto probe = [&](const Vector& yy, const Vector& xx) { return yy.dot(a * xx) / yy.dot(xx); };
  for (Index k = 0; k < n; ++k)
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      Vector xp = x, xm = x;
      xp(k) += h * dir;
      xm(k) -= h * dir;
      worst = std::max(worst, std::abs(probe(y, xp) - probe(y, xm)) / (2.0 * h));
      Vector yp = y, ym = y;
      yp(k) += h * dir;
      ym(k) -= h * dir;
      worst = std::max(worst, std::abs(probe(yp, x) - probe(ym, x)) / (2.0 * h));
    }
  return worst;
}

}  // namespace fovlab
