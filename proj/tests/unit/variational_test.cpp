#include <gtest/gtest.h>

#include "fovlab/rayleigh.hpp"
#include "fovlab/variational.hpp"
#include "test_support.hpp"

namespace fovlab::testing {
namespace {

EigenSystem fixture_system(const Matrix& a) { return eig(a); }

TEST(SubspaceExtremum, LeadingEigenspan) {
  const Matrix a = gen_prescribed({1.0, 2.0, 3.0, 4.0, 5.0}, 100.0, 13);
  const EigenSystem e = eig(a);
  for (Index j = 1; j <= 5; ++j) {
    EXPECT_NEAR(subspace_extremum(e, eigen_span(e, 0, j), Extremum::Max), static_cast<double>(j), 1e-10);
    EXPECT_NEAR(subspace_extremum(e, eigen_span(e, j - 1, 6 - j), Extremum::Min), static_cast<double>(j),
                1e-10);
  }
}

TEST(SubspaceExtremum, FullSpace) {
  const Matrix a = gen_prescribed({-3.0, 0.0, 7.0}, 50.0, 2);
  const EigenSystem e = eig(a);
  const Matrix full = Matrix::Identity(3, 3);
  EXPECT_NEAR(subspace_extremum(e, full, Extremum::Max), 7.0, 1e-10);
  EXPECT_NEAR(subspace_extremum(e, full, Extremum::Min), -3.0, 1e-10);
}

TEST(SubspaceExtremum, OneDimensionalMatchesQuotient) {
  const Matrix a = gen_prescribed({-1.0, 0.5, 2.0, 6.0}, 40.0, 7);
  const EigenSystem e = eig(a);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng = derived_rng(s, 4);
    const Vector x = random_vector(4, rng);
    const double value = subspace_extremum(e, x, Extremum::Max);
    EXPECT_NEAR(value, rq_gen(x, a, e).value.real(), 1e-11);
    EXPECT_EQ(value, subspace_extremum(e, x, Extremum::Min));
  }
}

TEST(SubspaceExtremum, Errors) {
  const EigenSystem e = eig(gen_prescribed({1.0, 2.0, 3.0}, 5.0, 1));
  Matrix dependent(3, 2);
  dependent.col(0) = Vector::Unit(3, 0);
  dependent.col(1) = 2.0 * Vector::Unit(3, 0);
  try {
    subspace_extremum(e, dependent, Extremum::Max);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::RankDeficientBasis);
  }
  EXPECT_THROW(subspace_extremum(e, Matrix(3, 0), Extremum::Max), Error);
  const EigenSystem rot = eig(mat2(0.0, 1.0, -1.0, 0.0));
  try {
    subspace_extremum(rot, Matrix::Identity(2, 2), Extremum::Max);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ComplexSpectrum);
  }
}

TEST(RayleighRitz, PrescribedFixture) {
  const Matrix a = gen_prescribed({-3.0, 0.0, 7.0}, 50.0, 2);
  const RitzExtrema r = rayleigh_ritz_extrema(a, eig(a), 1000, 1);
  EXPECT_NEAR(r.lambdaMin, -3.0, 1e-9);
  EXPECT_NEAR(r.lambdaMax, 7.0, 1e-9);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.samples, 1000);
  EXPECT_LE(r.worstExcess, 1e-8);
}

TEST(RayleighRitz, HermitianDiagonal) {
  const Matrix a = diag({1.0, 4.0});
  const RitzExtrema r = rayleigh_ritz_extrema(a, eig(a), 1000, 2);
  EXPECT_NEAR(r.lambdaMin, 1.0, 1e-12);
  EXPECT_NEAR(r.lambdaMax, 4.0, 1e-12);
  EXPECT_EQ(r.violations, 0);
}

TEST(RayleighRitz, SandwichOnSeededFixtures) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = gen_prescribed(random_spectrum(7, true, seed), seed % 2 ? 1e3 : 10.0, seed);
    const EigenSystem e = eig(a);
    const RitzExtrema r = rayleigh_ritz_extrema(a, e, 1000, seed);
    const double tol = variational_tolerance(std::max(std::abs(r.lambdaMin), std::abs(r.lambdaMax)), e.cond());
    EXPECT_NEAR(r.lambdaMin, e.value(0).real(), tol);
    EXPECT_NEAR(r.lambdaMax, e.value(6).real(), tol);
    EXPECT_EQ(r.violations, 0);
  }
}

TEST(RayleighRitz, ComplexSpectrumRejected) {
  const Matrix a = mat2(0.0, 1.0, -1.0, 0.0);
  EXPECT_THROW(rayleigh_ritz_extrema(a, eig(a), 10, 1), Error);
}

TEST(CourantFischer, FirstIndex) {
  const Matrix a = gen_prescribed({1.0, 2.0, 3.0, 4.0}, 20.0, 3);
  const CourantFischerReport r = courant_fischer_verify(a, eig(a), 1, 50, 1);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.minMax.achievedAtEigenspan, 1.0, 1e-10);
  for (double v : r.minMax.innerValues) EXPECT_GE(v, 1.0 - r.minMax.tol);
}

TEST(CourantFischer, LastIndexHasOneSubspace) {
  const Matrix a = gen_prescribed({1.0, 2.0, 3.0, 4.0}, 20.0, 3);
  const CourantFischerReport r = courant_fischer_verify(a, eig(a), 4, 30, 2);
  EXPECT_TRUE(r.passed());
  for (double v : r.minMax.innerValues) EXPECT_NEAR(v, 4.0, r.minMax.tol);
}

TEST(CourantFischer, MiddleIndexFixture) {
  const Matrix a = gen_prescribed({1.0, 2.0, 3.0, 4.0, 5.0}, 100.0, 13);
  const CourantFischerReport r = courant_fischer_verify(a, eig(a), 3, 200, 5);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.minMax.innerValues.size(), 200u);
  for (double v : r.minMax.innerValues) EXPECT_GE(v, 3.0 - 1e-8);
  for (double v : r.maxMin.innerValues) EXPECT_LE(v, 3.0 + 1e-8);
  EXPECT_NEAR(r.minMax.achievedAtEigenspan, 3.0, 1e-9);
  EXPECT_NEAR(r.maxMin.achievedAtEigenspan, 3.0, 1e-9);
  EXPECT_LE(r.minMax.worst_crossing(), 0.0);
}

TEST(CourantFischer, EveryIndexOnSeededFixtures) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Matrix a = gen_prescribed(random_spectrum(6, true, seed), 300.0, seed);
    const EigenSystem e = fixture_system(a);
    for (Index j = 1; j <= 6; ++j) EXPECT_TRUE(courant_fischer_verify(a, e, j, 40, seed).passed());
  }
}

TEST(CourantFischer, Errors) {
  const Matrix a = gen_prescribed({1.0, 2.0}, 2.0, 3);
  EXPECT_THROW(courant_fischer_verify(a, eig(a), 0, 5, 1), Error);
  EXPECT_THROW(courant_fischer_verify(a, eig(a), 3, 5, 1), Error);
}

TEST(CourantFischer, CrossingDetected) {
  // A report whose sampled inner max dips below lambda_j must fail.
  MinMaxReport m;
  m.lambdaJ = 2.0;
  m.tol = 1e-8;
  m.achievedAtEigenspan = 2.0;
  m.innerValues = {2.5, 1.9};
  EXPECT_FALSE(m.passed());
  EXPECT_NEAR(m.worst_crossing(), 0.1, 1e-15);
}

}  // namespace
}  // namespace fovlab::testing
