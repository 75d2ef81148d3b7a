#pragma once

// Fixture builders and independent oracles shared by the unit suites.

#include <cstdint>
#include <vector>

#include "fovlab/fovlab.hpp"

namespace fovlab::testing {

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix diag(std::initializer_list<Complex> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (const Complex& z : d) v(i++) = z;
  return v.asDiagonal();
}

inline Matrix jordan2() { return mat2(0.0, 1.0, 0.0, 0.0); }

/// B B* + I for a seeded Gaussian B: well-conditioned HPD.
inline Matrix random_hpd(Index n, std::uint64_t seed) {
  Rng rng = derived_rng(seed, 77);
  const Matrix b = random_matrix(n, n, rng);
  return hermitian_part(b * b.adjoint() + Matrix::Identity(n, n));
}

inline std::vector<Complex> random_spectrum(Index n, bool real, std::uint64_t seed) {
  Rng rng = derived_rng(seed, 5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> s;
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = real ? 0.0 : normal(rng);
    s.emplace_back(re, im);
  }
  return s;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Distance from z to the convex hull of `pts`, by brute force: minimum over
/// all pairs of segments when z is outside every triangle.
inline bool brute_inside_hull(const std::vector<Complex>& pts, Complex z, double tol) {
  // Inside iff contained in some triangle of input points, or within tol of
  // a segment / point.
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(z - pts[i]) <= tol) return true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (geom::segment_distance(z, pts[i], pts[j]) <= tol) return true;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double d1 = geom::cross(pts[j] - pts[i], z - pts[i]);
        const double d2 = geom::cross(pts[k] - pts[j], z - pts[j]);
        const double d3 = geom::cross(pts[i] - pts[k], z - pts[k]);
        const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
        const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
        if (!(neg && pos)) return true;
      }
    }
  }
  return false;
}

/// Winding number of the closed polygon around z (nonzero = inside).
inline int winding_number(const std::vector<Complex>& poly, Complex z) {
  int wn = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Complex a = poly[i];
    const Complex b = poly[(i + 1) % poly.size()];
    const double side = geom::cross(b - a, z - a);
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && side > 0) ++wn;
    } else if (b.imag() <= z.imag() && side < 0) {
      --wn;
    }
  }
  return wn;
}

/// Distance from z to a polygon's boundary by sampling nothing: exact minimum
/// over edges, written independently of Polygon::boundary_distance.
inline double edge_distance_oracle(const std::vector<Complex>& poly, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Complex a = poly[i];
    const Complex b = poly[(i + 1) % poly.size()];
    const Complex d = b - a;
    const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    best = std::min(best, std::abs(z - (a + t * d)));
  }
  return best;
}

}  // namespace fovlab::testing
