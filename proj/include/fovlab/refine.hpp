#pragma once

// Iterative refinement of simple eigenvalues.
//
// A backward-stable eigensolver returns eigenvalues of A + E with |E| ~ eps |A|,
// which moves an eigenvalue of condition kappa by up to kappa eps |A|. Newton
// steps on (x, lambda) with residuals A x - lambda x accumulated in
// double-double arithmetic converge to the eigenvalues of the stored A itself,
// to working precision in lambda.

#include <Eigen/LU>

#include <cmath>
#include <vector>

#include "fovlab/matcore.hpp"

namespace fovlab::detail {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble fast_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  const DoubleDouble t = two_sum(a.lo, b.lo);
  s = fast_two_sum(s.hi, s.lo + t.hi);
  return fast_two_sum(s.hi, s.lo + t.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, double b) {
  DoubleDouble p = two_prod(a.hi, b);
  return fast_two_sum(p.hi, p.lo + a.lo * b);
}

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = two_prod(a.hi, b.hi);
  return fast_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

struct ComplexDD {
  DoubleDouble re;
  DoubleDouble im;

  Complex value() const { return {re.hi + re.lo, im.hi + im.lo}; }
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) { return {a.re + b.re, a.im + b.im}; }

inline ComplexDD operator+(const ComplexDD& a, Complex b) {
  return {a.re + DoubleDouble{b.real(), 0.0}, a.im + DoubleDouble{b.imag(), 0.0}};
}

inline ComplexDD operator*(const ComplexDD& a, Complex b) {
  return {a.re * b.real() - a.im * b.imag(), a.re * b.imag() + a.im * b.real()};
}

inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

/// Refines a simple eigenvalue from an approximate pair. Returns lambda0
/// unchanged when the iteration does not settle, or when it drifts further
/// than `maxDrift` (half the distance to the nearest other eigenvalue).
inline Complex refine_eigenvalue(const Matrix& a, Complex lambda0, const Vector& x0,
                                 double maxDrift, int maxIter = 10) {
  const Index n = a.rows();
  Index s = 0;
  if (x0.cwiseAbs().maxCoeff(&s) == 0.0) return lambda0;
  const Vector xs = x0 / x0(s);

  // Fixed Jacobian: unknowns dx (with dx_s = 0) and dlambda, the latter
  // taking the place of column s.
  Matrix jac = a - lambda0 * Matrix::Identity(n, n);
  jac.col(s) = -xs;
  const Eigen::PartialPivLU<Matrix> lu(jac);

  std::vector<ComplexDD> x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = ComplexDD{} + xs(i);
  ComplexDD lambda = ComplexDD{} + lambda0;
  const double floor = std::max(1e-30 * a.norm(), 1e-300);

  for (int it = 0; it < maxIter; ++it) {
    Vector r(n);
    for (Index i = 0; i < n; ++i) {
      ComplexDD acc = x[static_cast<std::size_t>(i)] * lambda;
      acc = {-acc.re, -acc.im};
      for (Index j = 0; j < n; ++j) acc = acc + x[static_cast<std::size_t>(j)] * a(i, j);
      r(i) = acc.value();
    }
    Vector z = lu.solve(-r);
    if (!z.allFinite()) return lambda0;
    const Complex dLambda = z(s);
    z(s) = 0.0;
    for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + z(i);
    lambda = lambda + dLambda;
    const Complex current = lambda.value();
    if (std::abs(current - lambda0) > maxDrift) return lambda0;
    if (std::abs(dLambda) <= 1e-17 * std::max(std::abs(current), floor)) return current;
  }
  return lambda0;
}

}  // namespace fovlab::detail
