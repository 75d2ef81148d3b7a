#include <gtest/gtest.h>

#include "fovlab/matcore.hpp"
#include "fovlab/random.hpp"
#include "test_support.hpp"

namespace fovlab::testing {
namespace {

TEST(HermitianPart, NilpotentTwoByTwo) {
  const Matrix h = hermitian_part(jordan2());
  EXPECT_EQ(h, mat2(0.0, 0.5, 0.5, 0.0));
  EXPECT_EQ(hermitian_part(mat2(0.0, 2.0, 0.0, 0.0)), mat2(0.0, 1.0, 1.0, 0.0));
}

TEST(HermitianPart, FixedPointOnHermitian) {
  const Matrix a = random_hpd(6, 3);
  EXPECT_EQ(hermitian_part(a), a);
}

TEST(HermitianPart, MatchesElementwiseOracle) {
  Rng rng = derived_rng(11, 0);
  const Matrix a = random_matrix(8, 8, rng);
  const Matrix h = hermitian_part(a);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) {
      const Complex expect = (a(i, j) + std::conj(a(j, i))) / 2.0;
      EXPECT_LE(std::abs(h(i, j) - expect), 1e-15);
    }
  EXPECT_EQ(h, h.adjoint());
}

TEST(HermitianPart, IdempotentExactly) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = derived_rng(seed, 1);
    const Matrix h = hermitian_part(random_matrix(5, 5, rng));
    EXPECT_EQ(hermitian_part(h), h);
  }
}

TEST(HermitianPart, RejectsNonSquare) {
  try {
    hermitian_part(Matrix::Zero(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSquare);
  }
}

TEST(IsNormal, IdentityAndJordan) {
  EXPECT_TRUE(is_normal(Matrix::Identity(4, 4), 1e-14));
  EXPECT_FALSE(is_normal(jordan2(), 1e-3));
}

TEST(IsNormal, RandomUnitaryCommutatorOracle) {
  Rng rng = derived_rng(5, 0);
  const Matrix q = random_unitary(7, rng);
  const double comm = (q * q.adjoint() - q.adjoint() * q).norm();
  EXPECT_LE(comm, 1e-12 * q.squaredNorm());
  EXPECT_TRUE(is_normal(q, 1e-12));
  Rng rng2 = derived_rng(6, 0);
  EXPECT_FALSE(is_normal(random_matrix(7, 7, rng2), 1e-12));
}

TEST(MetricFromBasis, IdentityAndUnitary) {
  const Metric id = metric_from_basis(Matrix::Identity(3, 3));
  EXPECT_LE(max_abs(id.h() - Matrix::Identity(3, 3)), 1e-15);
  Rng rng = derived_rng(9, 0);
  const Metric m = metric_from_basis(random_unitary(6, rng));
  EXPECT_LE(max_abs(m.h() - Matrix::Identity(6, 6)), 1e-12);
}

TEST(MetricFromBasis, UpperShearInvertsGramByHand) {
  // VV* = [[2,1],[1,1]], whose inverse is [[1,-1],[-1,2]].
  const Matrix v = mat2(1.0, 1.0, 0.0, 1.0);
  const Matrix gram = v * v.adjoint();
  const Complex det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  const Matrix inverseByFormula = mat2(gram(1, 1), -gram(0, 1), -gram(1, 0), gram(0, 0)) / det;
  const Metric m = metric_from_basis(v);
  EXPECT_LE(max_abs(m.h() - inverseByFormula), 1e-14);
  EXPECT_LE(max_abs(m.h() - mat2(1.0, -1.0, -1.0, 2.0)), 1e-14);
}

TEST(MetricFromBasis, FactorIsUpperAndReconstructs) {
  Rng rng = derived_rng(21, 0);
  const Matrix v = random_matrix(9, 9, rng);
  const Metric m = metric_from_basis(v);
  const Matrix& c = m.factor();
  for (Index j = 0; j < 9; ++j)
    for (Index i = j + 1; i < 9; ++i) EXPECT_EQ(c(i, j), Complex(0.0, 0.0));
  EXPECT_LE(m.factor_residual(), kFactorTol);
  EXPECT_LE((m.h() * (v * v.adjoint()) - Matrix::Identity(9, 9)).norm(),
            1e-12 * m.condition_estimate());
  EXPECT_TRUE(is_hermitian(m.h()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.h());
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(MetricFromBasis, InvariantUnderColumnPhases) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = derived_rng(seed, 2);
    const Matrix v = random_matrix(6, 6, rng);
    Vector phases(6);
    for (Index k = 0; k < 6; ++k) phases(k) = std::polar(1.0, 0.7 * static_cast<double>(k + seed));
    const Matrix vd = v * phases.asDiagonal();
    const Matrix h1 = metric_from_basis(v).h();
    const Matrix h2 = metric_from_basis(vd).h();
    EXPECT_LE((h1 - h2).norm(), 1e-10 * h1.norm());
  }
}

TEST(MetricFromBasis, SingularBasisRejected) {
  Matrix v = Matrix::Identity(3, 3);
  v(2, 2) = 0.0;
  try {
    metric_from_basis(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularBasis);
  }
  // Configurable limit.
  const Matrix sheared = mat2(1.0, 1e3, 0.0, 1.0);
  EXPECT_NO_THROW(metric_from_basis(sheared));
  EXPECT_THROW(metric_from_basis(sheared, 100.0), Error);
}

TEST(MetricFromHpd, FactorReconstructs) {
  const Matrix h = random_hpd(5, 4);
  const Metric m = Metric::from_hpd(h);
  EXPECT_LE(m.factor_residual(), kFactorTol);
  EXPECT_THROW(Metric::from_hpd(mat2(1.0, 2.0, 2.0, 1.0)), Error);
  EXPECT_THROW(Metric::from_hpd(mat2(1.0, 2.0, 0.0, 1.0)), Error);
}

TEST(HInner, UnitVectorUnderIdentity) {
  const Metric m = Metric::identity(3);
  const Vector e1 = Vector::Unit(3, 0);
  EXPECT_EQ(h_inner(e1, e1, m), Complex(1.0, 0.0));
}

TEST(HInner, PositiveAndHermitianSymmetric) {
  const Metric m = Metric::from_hpd(random_hpd(6, 8));
  const double hNorm = m.h().norm();
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = derived_rng(100, i);
    const Vector x = random_vector(6, rng);
    const Vector y = random_vector(6, rng);
    const Complex xx = h_inner(x, x, m);
    EXPECT_GT(xx.real(), 0.0);
    EXPECT_LE(std::abs(xx.imag()), 1e-13 * x.squaredNorm() * hNorm);
    // Positivity through the factor: ||Cx||^2.
    EXPECT_NEAR(xx.real(), (m.factor() * x).squaredNorm(), 1e-12 * xx.real());
    const Complex xy = h_inner(x, y, m);
    const Complex yx = h_inner(y, x, m);
    EXPECT_LE(std::abs(xy - std::conj(yx)), 1e-14 * std::max(1.0, std::abs(xy)));
    // Conjugate-linear in the second argument: y* H x.
    EXPECT_LE(std::abs(xy - y.dot(m.h() * x)), 1e-12 * std::max(1.0, std::abs(xy)));
  }
}

TEST(HInner, DimensionMismatch) {
  const Metric m = Metric::identity(3);
  try {
    h_inner(Vector::Zero(2), Vector::Zero(3), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(h_norm(Vector::Zero(4), m), Error);
}

TEST(HNorm, EuclideanZeroAndExplicitMetric) {
  Rng rng = derived_rng(4, 4);
  const Vector x = random_vector(5, rng);
  EXPECT_DOUBLE_EQ(h_norm(x, Metric::identity(5)), x.norm());
  EXPECT_EQ(h_norm(Vector::Zero(5), Metric::identity(5)), 0.0);

  const Metric m = Metric::from_hpd(random_hpd(5, 2));
  const double viaH = std::sqrt(x.dot(m.h() * x).real());
  EXPECT_NEAR(h_norm(x, m), viaH, 1e-14 * viaH * 10);
}

TEST(HNorm, TriangleInequality) {
  const Metric m = metric_from_basis([] {
    Rng rng = derived_rng(31, 0);
    return random_matrix(6, 6, rng);
  }());
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = derived_rng(32, i);
    const Vector x = random_vector(6, rng);
    const Vector y = random_vector(6, rng);
    EXPECT_LE(h_norm(x + y, m), (h_norm(x, m) + h_norm(y, m)) * (1.0 + 1e-14));
  }
}

TEST(Metric, SolveInvertsH) {
  const Metric m = Metric::from_hpd(random_hpd(4, 12));
  Rng rng = derived_rng(1, 1);
  const Vector b = random_vector(4, rng);
  EXPECT_LE((m.h() * m.solve(b) - b).norm(), 1e-12 * b.norm());
}

}  // namespace
}  // namespace fovlab::testing
