#pragma once

// The generalized two-sided field of values
//
//   G(A) = { y*Ax : y = (VV*)^{-1} x, y*x = 1 }
//
// of a nondefective A = V Lambda V^{-1}. With H = (VV*)^{-1} this is the
// Givens field F_H(A), and with z = V^{-1} x it is F(Lambda), i.e. the convex
// hull of the spectrum. gfov() builds the hull and checks it against the
// Givens route and against definitional samples.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fovlab/fov.hpp"
#include "fovlab/geometry.hpp"
#include "fovlab/random.hpp"
#include "fovlab/spectra.hpp"

namespace fovlab {

struct GfovOptions {
  double condLimit = kCondLimit;
  int crossCheckAngles = kDefaultAngles;  // 0 skips the Givens cross-check
  int nSamples = 1000;                    // 0 skips definitional sampling
  std::uint64_t seed = 42;
};

struct GfovResult {
  Polygon polygon;
  EigenSystem eigSystem;
  Metric metric;
  double samplesInsideFraction = 1.0;
  double crossCheckGap = 0.0;
  double crossTol = 0.0;
};

/// 1e-8 * scale * max(1, condV / 1e3)
inline double sample_tolerance(const EigenSystem& e) {
  return 1e-8 * spectral_scale(e.values()) * std::max(1.0, e.cond() / 1e3);
}

/// Tolerance for comparing hull(sigma(A)) with the sweep of C A C^{-1}. The
/// similarity transform loses about eps * condV^2 in relative accuracy.
inline double cross_check_tolerance(const EigenSystem& e) {
  return spectral_scale(e.values()) * std::max(1e-6, 1e-15 * e.cond() * e.cond());
}

/// n seeded definitional values y*Ax with y = Hx and y*x = 1.
inline std::vector<Complex> gfov_samples(const Matrix& a, const EigenSystem& e, int n,
                                         std::uint64_t seed) {
  require_square(a, "gfov_samples");
  require_dim(e.dim(), a.rows(), "gfov_samples");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gfov_samples: n must be >= 1");
  const Metric& m = e.metric();
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(i));
    Vector x = random_vector(a.rows(), rng);
    // y*x = x*Hx = ||Cx||^2 > 0 for x != 0
    x /= h_norm(x, m);
    const Vector y = m.h() * x;
    out.push_back(y.dot(a * x));
  }
  return out;
}

inline std::vector<Complex> gfov_samples(const Matrix& a, int n, std::uint64_t seed) {
  return gfov_samples(a, eig(a), n, seed);
}

inline GfovResult gfov(const Matrix& a, const GfovOptions& opt = {}) {
  EigenSystem e = eig(a, opt.condLimit);
  Polygon polygon = hull(e.values());
  GfovResult result{polygon, e, e.metric()};
  result.crossTol = cross_check_tolerance(e);
  if (opt.crossCheckAngles > 0) {
    const Polygon givens = givens_fov_boundary(a, e.metric(), opt.crossCheckAngles);
    result.crossCheckGap = hausdorff(polygon, givens);
    if (!(result.crossCheckGap <= result.crossTol))
      throw Error(ErrorCode::DefectiveMatrix,
                  "Givens cross-check gap " + std::to_string(result.crossCheckGap) +
                      " exceeds " + std::to_string(result.crossTol) +
                      "; eigenbasis too ill-conditioned to certify G(A)");
  }
  if (opt.nSamples > 0) {
    const double tol = sample_tolerance(e);
    const auto samples = gfov_samples(a, e, opt.nSamples, opt.seed);
    std::size_t inside = 0;
    for (const Complex& s : samples)
      if (contains(polygon, s, tol)) ++inside;
    result.samplesInsideFraction = static_cast<double>(inside) / static_cast<double>(samples.size());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Positive definiteness in the H-inner product

inline constexpr double kPdTol = 1e-10;

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, NotPositive, ComplexSpectrum };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::PositiveSemidefinite: return "positive-semidefinite";
    case Definiteness::NotPositive: return "not-positive";
    case Definiteness::ComplexSpectrum: return "complex-spectrum";
  }
  return "unknown";
}

struct DefinitenessSample {
  Vector x;
  Vector y;
  Complex value;
};

struct DefinitenessReport {
  Definiteness classification = Definiteness::ComplexSpectrum;
  double minRealEig = 0.0;
  /// Definitional sample with the smallest real part (positive-definite only).
  std::optional<DefinitenessSample> witnessSample;
  /// All cross-validation samples had Re(y*Ax) > 0.
  bool samplesConsistent = true;
};

/// Classifies on the eigenvalues; a positive-definite verdict is
/// cross-validated with 100 definitional samples.
inline DefinitenessReport definiteness(const Matrix& a, std::uint64_t seed = 42,
                                       double condLimit = kCondLimit) {
  const EigenSystem e = eig(a, condLimit);
  DefinitenessReport rep;
  double minRe = std::numeric_limits<double>::infinity();
  for (const Complex& l : e.values()) minRe = std::min(minRe, l.real());
  rep.minRealEig = minRe;
  if (!is_real_spectrum(e, kPdTol)) {
    rep.classification = Definiteness::ComplexSpectrum;
    return rep;
  }
  const double scale = spectral_scale(e.values());
  if (minRe > kPdTol * scale)
    rep.classification = Definiteness::PositiveDefinite;
  else if (minRe > -kPdTol * scale)
    rep.classification = Definiteness::PositiveSemidefinite;
  else
    rep.classification = Definiteness::NotPositive;

  if (rep.classification == Definiteness::PositiveDefinite) {
    const Metric& m = e.metric();
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng = derived_rng(seed, i);
      Vector x = random_vector(a.rows(), rng);
      x /= h_norm(x, m);
      Vector y = m.h() * x;
      const Complex value = y.dot(a * x);
      if (!(value.real() > 0.0)) rep.samplesConsistent = false;
      if (!rep.witnessSample || value.real() < rep.witnessSample->value.real())
        rep.witnessSample = DefinitenessSample{x, y, value};
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Translation, scaling, normal-case and Hermitian-part identities

enum class CheckStatus { Passed, Failed, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Passed: return "pass";
    case CheckStatus::Failed: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

struct PropertyCheck {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double gap = 0.0;        // measured discrepancy
  double threshold = 0.0;  // tol * scale it was compared against
  std::string note;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Failed) return false;
    return true;
  }

  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline PropertyCheck judge(std::string name, double gap, double threshold) {
  PropertyCheck c;
  c.name = std::move(name);
  c.gap = gap;
  c.threshold = threshold;
  c.status = gap <= threshold ? CheckStatus::Passed : CheckStatus::Failed;
  return c;
}

inline PropertyCheck skipped(std::string name, std::string why) {
  PropertyCheck c;
  c.name = std::move(name);
  c.note = std::move(why);
  return c;
}

}  // namespace detail

inline constexpr double kNormalityTol = 1e-10;

/// Checks, each as a polygon identity at tol * scale:
///   translation     G(A + alpha I) = G(A) + alpha
///   scaling         G(alpha A) = alpha G(A)
///   normal          G(A) = F(A) when A is normal
///   hermitian-part  G(H(A)) = [lmin, lmax] of H(A) = real extent of F(A)
inline PropertyReport verify_gfov_properties(const Matrix& a, Complex alpha, double tol,
                                             int nAngles = 512,
                                             double condLimit = kCondLimit) {
  require_square(a, "verify_gfov_properties");
  const Index n = a.rows();
  GfovOptions opt;
  opt.condLimit = condLimit;
  const GfovResult base = gfov(a, opt);
  const double lambdaScale = spectral_scale(base.eigSystem.values());
  const double alphaMod = std::abs(alpha);

  PropertyReport rep;
  {
    const Matrix shifted = a + alpha * Matrix::Identity(n, n);
    const GfovResult g = gfov(shifted, opt);
    rep.checks.push_back(detail::judge("translation",
                                       hausdorff(g.polygon, base.polygon.translated(alpha)),
                                       tol * (lambdaScale + alphaMod)));
  }
  if (alpha != Complex(0.0, 0.0)) {
    const GfovResult g = gfov(alpha * a, opt);
    rep.checks.push_back(detail::judge("scaling", hausdorff(g.polygon, base.polygon.scaled(alpha)),
                                       tol * lambdaScale * std::max(1.0, alphaMod)));
  } else {
    rep.checks.push_back(detail::skipped("scaling", "alpha = 0"));
  }

  std::optional<Polygon> fov;
  auto fovPolygon = [&]() -> const Polygon& {
    if (!fov) fov = fov_boundary(a, nAngles);
    return *fov;
  };

  if (is_normal(a, kNormalityTol)) {
    rep.checks.push_back(detail::judge("normal", hausdorff(base.polygon, fovPolygon()),
                                       tol * lambdaScale));
  } else {
    rep.checks.push_back(detail::skipped("normal", "matrix is not normal"));
  }

  {
    const Matrix hp = hermitian_part(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hp, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(n - 1);
    const double hpScale = std::max({1.0, std::abs(lmin), std::abs(lmax)});
    const Polygon interval = hull({Complex(lmin, 0.0), Complex(lmax, 0.0)});
    const GfovResult g = gfov(hp, opt);
    const auto [lo, hi] = fovPolygon().real_extent();
    const double gap = std::max({hausdorff(g.polygon, interval), std::abs(lo - lmin),
                                 std::abs(hi - lmax)});
    rep.checks.push_back(detail::judge("hermitian-part", gap, tol * hpScale));
  }
  return rep;
}

}  // namespace fovlab
