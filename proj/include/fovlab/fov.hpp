#pragma once

// Field of values F(A) by the supporting-line sweep, and the Givens field
// F_H(A) = F(C A C^{-1}) for H = C*C.
//
// For each angle t the largest eigenvalue of hermitian_part(e^{it} A) is the
// support value max { Re(e^{it} z) : z in F(A) } and its eigenvector x gives
// the boundary point x*Ax. After the uniform sweep, each pair of neighbouring
// boundary points is probed once more along the chord's outward normal; this
// either certifies the chord as a supporting segment or exposes a boundary
// point that the uniform grid stepped over (a polygon corner with a narrow
// normal cone, typically).

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "fovlab/geometry.hpp"
#include "fovlab/matcore.hpp"

namespace fovlab {

inline constexpr int kDefaultAngles = 256;

struct BoundaryOptions {
  /// Extra chord-normal probes after the uniform sweep; negative means
  /// "as many as nAngles", zero disables refinement.
  int refineBudget = -1;
  /// Relative width of a flat facet: eigenvalues of the Hermitian part within
  /// tieTol * scale of the top one are treated as a multiple top eigenvalue.
  double tieTol = 1e-10;
  /// A chord whose outward gap is below refineTol * scale is certified.
  double refineTol = 1e-13;
};

/// Support value and extreme boundary point(s) in direction e^{-i angle}.
struct SupportSample {
  double angle = 0.0;
  double support = 0.0;
  std::vector<Complex> points;
};

/// max(1, ||A||_F)
inline double matrix_scale(const Matrix& a) { return std::max(1.0, a.norm()); }

namespace detail {

inline Complex rayleigh_point(const Matrix& a, const Vector& x) { return x.dot(a * x) / x.squaredNorm(); }

inline SupportSample support_sample(const Matrix& a, double angle, double tieTol, double scale) {
  const Index n = a.rows();
  const Complex rot = std::polar(1.0, angle);
  const Matrix rotated = rot * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rotated));
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  const auto& evals = es.eigenvalues();
  const Matrix& evecs = es.eigenvectors();

  SupportSample s;
  s.angle = angle;
  s.support = evals(n - 1);
  Index k = 1;
  while (k < n && evals(n - 1 - k) >= s.support - tieTol * scale) ++k;
  if (k == 1) {
    s.points.push_back(rayleigh_point(a, evecs.col(n - 1)));
    return s;
  }
  // Multiple top eigenvalue: the facet endpoints are the extremes of the
  // skew-Hermitian part compressed to the top eigenspace.
  const Matrix top = evecs.rightCols(k);
  const Matrix compressed = top.adjoint() * rotated * top;
  const Matrix skew = (compressed - compressed.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Matrix> facet(hermitian_part(skew));
  if (facet.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  s.points.push_back(rayleigh_point(a, top * facet.eigenvectors().col(0)));
  s.points.push_back(rayleigh_point(a, top * facet.eigenvectors().col(k - 1)));
  return s;
}

/// The point of `s` that is extreme in direction e^{-i angle}.
inline Complex extreme_toward(const SupportSample& s, double angle) {
  const Complex rot = std::polar(1.0, angle);
  Complex best = s.points.front();
  for (const Complex& p : s.points)
    if ((rot * p).real() > (rot * best).real()) best = p;
  return best;
}

inline double wrap_angle(double t) {
  constexpr double twoPi = 2.0 * std::numbers::pi;
  t = std::fmod(t, twoPi);
  return t < 0.0 ? t + twoPi : t;
}

}  // namespace detail

/// Boundary points of F(A): nAngles uniform supporting-line samples on
/// [0, 2 pi) followed by chord-normal refinement.
inline std::vector<Complex> fov_boundary_points(const Matrix& a, int nAngles,
                                                const BoundaryOptions& opt = {}) {
  require_square(a, "fov_boundary");
  if (nAngles < 3) throw Error(ErrorCode::InvalidArgument, "fov_boundary: nAngles must be >= 3");
  const double scale = matrix_scale(a);
  const double step = 2.0 * std::numbers::pi / nAngles;

  std::vector<SupportSample> samples;
  samples.reserve(static_cast<std::size_t>(nAngles));
  for (int k = 0; k < nAngles; ++k)
    samples.push_back(detail::support_sample(a, k * step, opt.tieTol, scale));

  std::vector<Complex> points;
  for (const auto& s : samples) points.insert(points.end(), s.points.begin(), s.points.end());

  struct Gap {
    double priority;
    double start;  // interval [start, start + width]
    double width;
    SupportSample lo;
    SupportSample hi;
    bool operator<(const Gap& other) const {
      if (priority != other.priority) return priority < other.priority;
      return start > other.start;
    }
  };
  std::priority_queue<Gap> queue;
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nAngles; ++k)
    queue.push(Gap{inf, k * step, step, samples[static_cast<std::size_t>(k)],
                   samples[static_cast<std::size_t>((k + 1) % nAngles)]});

  int budget = opt.refineBudget < 0 ? nAngles : opt.refineBudget;
  while (budget > 0 && !queue.empty()) {
    Gap g = queue.top();
    queue.pop();
    const Complex pa = detail::extreme_toward(g.lo, g.start + g.width);
    const Complex pb = detail::extreme_toward(g.hi, g.start);
    const Complex chord = pb - pa;
    if (std::abs(chord) <= opt.refineTol * scale) continue;
    // Normal angles t with e^{it} chord purely imaginary.
    const double base = std::numbers::pi / 2.0 - std::arg(chord);
    double probe = -1.0;
    for (double cand : {base, base + std::numbers::pi}) {
      const double offset = detail::wrap_angle(cand - g.start);
      if (offset > 0.0 && offset < g.width) probe = g.start + offset;
    }
    if (probe < 0.0) continue;
    SupportSample s = detail::support_sample(a, probe, opt.tieTol, scale);
    --budget;
    const double gap = s.support - (std::polar(1.0, probe) * pa).real();
    if (gap <= opt.refineTol * scale) {
      points.insert(points.end(), s.points.begin(), s.points.end());
      continue;
    }
    points.insert(points.end(), s.points.begin(), s.points.end());
    queue.push(Gap{gap, g.start, probe - g.start, g.lo, s});
    queue.push(Gap{gap, probe, g.start + g.width - probe, s, g.hi});
  }
  return points;
}

/// Inscribed polygon approximation of F(A).
inline Polygon fov_boundary(const Matrix& a, int nAngles = kDefaultAngles,
                            const BoundaryOptions& opt = {}) {
  const auto points = fov_boundary_points(a, nAngles, opt);
  return hull(points);
}

/// C A C^{-1} for the metric factor C, via a triangular solve.
inline Matrix givens_transform(const Matrix& a, const Metric& m) {
  require_square(a, "givens_transform");
  require_dim(m.dim(), a.rows(), "givens_transform");
  const Matrix& c = m.factor();
  // Y = A C^{-1}  <=>  C* Y* = A*
  const Matrix yAdj = c.adjoint().triangularView<Eigen::Lower>().solve(a.adjoint());
  return c * yAdj.adjoint();
}

/// F_H(A) = F(C A C^{-1}).
inline Polygon givens_fov_boundary(const Matrix& a, const Metric& m, int nAngles = kDefaultAngles,
                                   const BoundaryOptions& opt = {}) {
  return fov_boundary(givens_transform(a, m), nAngles, opt);
}

}  // namespace fovlab
