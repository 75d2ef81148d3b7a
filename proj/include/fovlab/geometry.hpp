#pragma once

// Convex polygons in the complex plane.
//
// A Polygon is stored counterclockwise starting at the lowest (then leftmost)
// vertex. One vertex is a point, two vertices a segment.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "fovlab/error.hpp"

namespace fovlab {

namespace geom {

using Point = std::complex<double>;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

/// Distance from z to the closed segment [a, b].
inline double segment_distance(Point z, Point a, Point b) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = ((z - a) * std::conj(d)).real() / len2;
  // Endpoints directly: a + 1 * (b - a) need not round to b.
  if (t <= 0.0) return std::abs(z - a);
  if (t >= 1.0) return std::abs(z - b);
  return std::abs(z - (a + t * d));
}

inline bool lower_left(Point a, Point b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

}  // namespace geom

class Polygon {
 public:
  using Point = geom::Point;

  Polygon() = default;

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool is_point() const { return vertices_.size() == 1; }
  bool is_segment() const { return vertices_.size() == 2; }

  /// Magnitude of the largest vertex, at least 1.
  double scale() const {
    double s = 1.0;
    for (const Point& p : vertices_) s = std::max(s, std::abs(p));
    return s;
  }

  std::pair<double, double> real_extent() const {
    double lo = vertices_.front().real(), hi = lo;
    for (const Point& p : vertices_) {
      lo = std::min(lo, p.real());
      hi = std::max(hi, p.real());
    }
    return {lo, hi};
  }

  std::pair<double, double> imag_extent() const {
    double lo = vertices_.front().imag(), hi = lo;
    for (const Point& p : vertices_) {
      lo = std::min(lo, p.imag());
      hi = std::max(hi, p.imag());
    }
    return {lo, hi};
  }

  /// Distance from z to the polygon as a set (0 inside).
  double distance(Point z) const {
    if (vertices_.empty()) throw Error(ErrorCode::EmptyInput, "distance to empty polygon");
    if (vertices_.size() == 1) return std::abs(z - vertices_[0]);
    if (vertices_.size() == 2) return geom::segment_distance(z, vertices_[0], vertices_[1]);
    bool inside = true;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point a = vertices_[i];
      const Point b = vertices_[(i + 1) % vertices_.size()];
      if (geom::cross(b - a, z - a) < 0.0) {
        inside = false;
        break;
      }
    }
    if (inside) return 0.0;
    return boundary_distance(z);
  }

  /// Distance from z to the boundary curve.
  double boundary_distance(Point z) const {
    if (vertices_.size() == 1) return std::abs(z - vertices_[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point a = vertices_[i];
      const Point b = vertices_[(i + 1) % vertices_.size()];
      best = std::min(best, geom::segment_distance(z, a, b));
      if (vertices_.size() == 2) break;
    }
    return best;
  }

  Polygon translated(Point shift) const {
    std::vector<Point> pts(vertices_);
    for (Point& p : pts) p += shift;
    return from_canonical_candidates(std::move(pts));
  }

  /// Image under z -> alpha z (rotation and positive scaling).
  Polygon scaled(Point alpha) const {
    std::vector<Point> pts(vertices_);
    for (Point& p : pts) p *= alpha;
    return from_canonical_candidates(std::move(pts));
  }

  friend Polygon hull(std::span<const Point> points, double collinearTol);

 private:
  static Polygon from_canonical_candidates(std::vector<Point> pts);

  std::vector<Point> vertices_;
};

/// Andrew's monotone chain on exact turns, then vertices within
/// collinearTol * scale of the segment joining their neighbours are dropped.
/// Dropping during the sweep would be wrong for near-vertical sets, whose
/// x-order is unrelated to their order along the line.
inline Polygon hull(std::span<const Polygon::Point> points, double collinearTol = 1e-12) {
  using geom::Point;
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "hull of an empty point set");
  double scale = 1.0;
  for (const Point& p : points) scale = std::max(scale, std::abs(p));
  const double tol = collinearTol * scale;

  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polygon poly;
  if (pts.size() == 1) {
    poly.vertices_ = pts;
    return poly;
  }

  // Keeps b only on a strict clockwise turn o -> b -> p.
  auto keeps = [](Point o, Point b, Point p) { return geom::cross(b - o, p - o) < 0.0; };
  std::vector<Point> chain;
  chain.reserve(2 * pts.size());
  for (const Point& p : pts) {
    while (chain.size() >= 2 && !keeps(chain[chain.size() - 2], chain.back(), p)) chain.pop_back();
    chain.push_back(p);
  }
  const std::size_t lowerSize = chain.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (chain.size() >= lowerSize && !keeps(chain[chain.size() - 2], chain.back(), *it))
      chain.pop_back();
    chain.push_back(*it);
  }
  chain.pop_back();  // first point repeated at the end

  // The chain above is clockwise; reverse to CCW.
  std::reverse(chain.begin(), chain.end());

  for (bool changed = true; changed && chain.size() >= 3;) {
    changed = false;
    for (std::size_t i = 0; i < chain.size() && chain.size() >= 3;) {
      const Point prev = chain[(i + chain.size() - 1) % chain.size()];
      const Point next = chain[(i + 1) % chain.size()];
      if (geom::segment_distance(chain[i], prev, next) <= tol) {
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }

  // Collapse a numerically degenerate result to a point.
  if (chain.size() >= 2) {
    double diam = 0.0;
    for (const Point& p : chain)
      for (const Point& q : chain) diam = std::max(diam, std::abs(p - q));
    if (diam <= tol) chain.resize(1);
  }
  if (chain.size() == 1) {
    poly.vertices_ = {chain.front()};
    return poly;
  }

  auto first = std::min_element(chain.begin(), chain.end(), geom::lower_left);
  std::rotate(chain.begin(), first, chain.end());
  poly.vertices_ = std::move(chain);
  return poly;
}

inline Polygon hull(std::initializer_list<Polygon::Point> points, double collinearTol = 1e-12) {
  return hull(std::span<const Polygon::Point>(points.begin(), points.size()), collinearTol);
}

inline Polygon Polygon::from_canonical_candidates(std::vector<Point> pts) {
  return hull(pts, 0.0);
}

/// True iff z lies within distance tol of p.
inline bool contains(const Polygon& p, Polygon::Point z, double tol) {
  return p.distance(z) <= tol;
}

/// Symmetric Hausdorff distance. For convex sets the distance to the other
/// set is convex, so its maximum over a polygon sits at a vertex.
inline double hausdorff(const Polygon& p, const Polygon& q) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptyInput, "hausdorff of an empty polygon");
  double d = 0.0;
  for (const auto& v : p.vertices()) d = std::max(d, q.distance(v));
  for (const auto& v : q.vertices()) d = std::max(d, p.distance(v));
  return d;
}

}  // namespace fovlab
