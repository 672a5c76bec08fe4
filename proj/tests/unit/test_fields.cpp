#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hcontract/contraction.hpp"
#include "hcontract/fields.hpp"
#include "oracles.hpp"

using namespace hcontract;

namespace {

const auto kBasis = so3_basis();

const FdConfig kFd{};
const FdConfig kFdOnly{1e-5, false, false};
const FdConfig kRichardson{1e-4, true, false};

HorizontalField entry33_field(const SpaceDescriptor& so3) {
  HorizontalField f;
  f.name = "entry33";
  f.space = so3.name();
  f.m = 3;
  f.coeff = [](const Matrix& r, double) { return Vector{r(2, 2), 0.0, 0.0}; };
  return f;
}

}  // namespace

TEST(LieDerivative, ConstantFieldIsZero) {
  const auto so3 = make_so3_biinvariant();
  const auto f = constant_field(so3, Vector{0.4, -1.0, 2.0});
  const Matrix g = expm(hat3(Vector{0.3, 0.1, -0.9}));
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(lie_derivative(f, so3, j, g, kFdOnly), (Vector{0, 0, 0}));
    EXPECT_EQ(lie_derivative(f, so3, j, g, kFd), (Vector{0, 0, 0}));
  }
}

TEST(LieDerivative, EuclideanLinearFieldGivesColumns) {
  const auto e = make_euclidean(2);
  const Matrix m{{-2.0, 0.5}, {1.5, -1.0}};
  const auto f = linear_field(e, m);
  const Matrix g = expm(e.dec().m_combination(Vector{0.7, -3.0}));
  for (std::size_t j = 0; j < 2; ++j) {
    const Vector d = lie_derivative(f, e, j, g, kFdOnly);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(d[i], m(i, j), 1e-9);
  }
}

TEST(LieDerivative, RotationEntryAlongX) {
  const auto so3 = make_so3_biinvariant();
  const auto f = entry33_field(so3);
  const Vector at_identity = lie_derivative(f, so3, 0, Matrix::identity(3), kFdOnly);
  EXPECT_NEAR(at_identity[0], 0.0, 1e-12);
  const double base = std::numbers::pi / 4;
  const Vector d = lie_derivative(f, so3, 0, expm(base * kBasis[0]), kRichardson);
  // [expm((base + t) A_X)]_33 = cos(base + t)
  EXPECT_NEAR(d[0], -std::sin(base), 1e-8);
  EXPECT_EQ(d[1], 0.0);
}

TEST(LieDerivative, ReportsNonFiniteEvaluationPoint) {
  const auto so3 = make_so3_biinvariant();
  HorizontalField f = entry33_field(so3);
  f.coeff = [](const Matrix& r, double) { return Vector{1.0 / (r(0, 0) - 1.0), 0.0, 0.0}; };
  try {
    linearize(f, so3, Matrix::identity(3), kFdOnly);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("g = "), std::string::npos);
  }
}

TEST(Linearize, SO3OpenLoopHasZeroMeasure) {
  const auto so3 = make_so3_biinvariant();
  const Vector u{0.3, -1.2, 0.8};
  const auto f = constant_field(so3, u);
  const auto lin = linearize(f, so3, expm(hat3(Vector{1.0, 0.2, -0.4})), kFd);
  // Only the alpha term survives: u^k alpha^i_{jk}, skew in (i, j).
  EXPECT_LE((lin.mat + lin.mat.transpose()).max_abs(), 1e-15);
  EXPECT_NEAR(lin.mat(0, 1), 0.5 * u[2], 1e-15);
  EXPECT_EQ(matrix_measure(lin), 0.0);
}

TEST(Linearize, EuclideanLinearFieldIsItsMatrix) {
  const auto e = make_euclidean(3);
  const Matrix m{{-1, 2, 0}, {0.5, -3, 1}, {0, 0, -0.2}};
  const auto f = linear_field(e, m);
  const Matrix g = expm(e.dec().m_combination(Vector{1, 2, 3}));
  EXPECT_EQ(linearize(f, e, g, kFd).mat, m);
  EXPECT_LE((linearize(f, e, g, kFdOnly).mat - m).max_abs(), 1e-9);
}

TEST(Linearize, SphereGradientAtThePole) {
  const auto s = make_sphere2();
  const auto lin = linearize(sphere_height_gradient(s), s, Matrix::identity(3), kFd);
  EXPECT_LE((lin.mat - Matrix{{-1, 0}, {0, -1}}).max_abs(), 1e-9);
  const auto h = oracle::height_hessian(Matrix::identity(3));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(lin.mat(i, j), h[i][j], 1e-6);
}

TEST(Linearize, SphereGradientMatchesHessianOracle) {
  const auto s = make_sphere2();
  const auto f = sphere_height_gradient(s);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix r = oracle::random_rotation(rng);
    const auto lin = linearize(f, s, r, kFd);
    const auto h = oracle::height_hessian(r);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(lin.mat(i, j), h[i][j], 1e-6);
    // analytic value: -cos(theta) I, cos(theta) = o . R o
    EXPECT_NEAR(matrix_measure(lin), -r(2, 2), 1e-8);
  }
}

TEST(Linearize, RichardsonResidualIsReported) {
  const auto s = make_sphere2();
  const auto lin = linearize(sphere_height_gradient(s), s, expm(0.7 * kBasis[0]), kRichardson);
  EXPECT_GT(lin.fd_residual, 0.0);
  EXPECT_LT(lin.fd_residual, 1e-6);
  EXPECT_EQ(linearize(sphere_height_gradient(s), s, Matrix::identity(3), kFd).fd_residual, 0.0);
}

TEST(Linearize, IsLinearInTheField) {
  const auto s = make_sphere2();
  const auto a = sphere_height_gradient(s), b = sphere_rotation(s);
  const auto c = linear_combination(2.0, a, -0.7, b);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix r = oracle::random_rotation(rng);
    const Matrix lhs = linearize(c, s, r).mat;
    const Matrix rhs = 2.0 * linearize(a, s, r).mat + (-0.7) * linearize(b, s, r).mat;
    EXPECT_LE((lhs - rhs).max_abs(), 1e-9);
  }
}

TEST(Linearize, RejectsDimensionMismatch) {
  const auto so3 = make_so3_biinvariant();
  const auto s = make_sphere2();
  EXPECT_THROW(linearize(sphere_height_gradient(s), so3, Matrix::identity(3)), std::invalid_argument);
}

TEST(CovariantApply, Examples) {
  const auto s = make_sphere2();
  const auto f = sphere_height_gradient(s);
  const Vector zero = covariant_apply(f, s, expm(0.3 * kBasis[1]), Vector{0, 0});
  EXPECT_EQ(zero, (Vector{0, 0}));
  const Vector w = covariant_apply(f, s, Matrix::identity(3), Vector{1, 0});
  EXPECT_NEAR(w[0], -1.0, 1e-9);
  EXPECT_NEAR(w[1], 0.0, 1e-9);

  const auto e = make_euclidean(2);
  const Matrix m{{-2, 3}, {1, -1}};
  const Vector me1 = covariant_apply(linear_field(e, m), e, Matrix::identity(3), Vector{1, 0});
  EXPECT_EQ(me1, (Vector{-2, 1}));
}

TEST(CosetConsistency, GradientFieldPasses) {
  const auto s = make_sphere2();
  const auto rep =
      coset_consistency_check(sphere_height_gradient(s), s, Matrix::identity(3), {expm(1.1 * kBasis[2])});
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_gap, 1e-6);
}

TEST(CosetConsistency, TrivialIsotropyPassesVacuously) {
  const auto so3 = make_so3_biinvariant();
  const auto f = open_loop_field(so3, attitude_demo_input);
  const auto rep = coset_consistency_check(f, so3, expm(hat3(Vector{0.2, 0.3, 0.1})), so3.h_samples());
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.max_gap, 0.0);
}

TEST(CosetConsistency, NonEquivariantFieldFails) {
  const auto s = make_sphere2();
  std::mt19937_64 rng(43);
  const auto rep = coset_consistency_check(sphere_nonequivariant(s), s, oracle::random_rotation(rng), s.h_samples());
  EXPECT_FALSE(rep.pass);
  EXPECT_GE(rep.max_gap, 1e-2);
}

TEST(CosetConsistency, SampleOutsideIsotropyThrows) {
  const auto s = make_sphere2();
  EXPECT_THROW(coset_consistency_check(sphere_height_gradient(s), s, Matrix::identity(3), {expm(0.2 * kBasis[0])}),
               std::invalid_argument);
}

TEST(ChangeBasis, QuadraticFormsAgree) {
  const auto s = make_sphere2();
  const auto f = sphere_spiral(s);
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix q = random_orthogonal(2, 100 + trial);
    const auto rotated = s.with_m_basis(rotate_m_basis(s, q));
    const Matrix r = oracle::random_rotation(rng);
    const Matrix p = symmetric_part(linearize(f, s, r).mat);
    const Matrix pq = symmetric_part(linearize(change_basis(f, q), rotated, r).mat);
    const Vector v{g(rng), g(rng)};
    const Vector w = q.transpose() * std::span<const double>(v);  // coordinates of the same vector in the new basis
    EXPECT_NEAR(dot(v, p * std::span<const double>(v)), dot(w, pq * std::span<const double>(w)), 1e-8);
  }
}

TEST(DemoFields, AttitudeInput) {
  const Vector u0 = attitude_demo_input(0.0);
  EXPECT_EQ(u0, (Vector{1.0, 1.0, 0.0}));
  const Vector u5 = attitude_demo_input(5.0);
  EXPECT_NEAR(u5[0], 0.0, 1e-15);
  EXPECT_NEAR(u5[1], 0.0, 1e-15);
  EXPECT_NEAR(u5[2], 1.0, 1e-15);
}

TEST(DemoFields, SphereRotationIsTangentAndSkew) {
  const auto s = make_sphere2();
  const auto f = sphere_rotation(s);
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix r = oracle::random_rotation(rng);
    EXPECT_LE(matrix_measure(linearize(f, s, r)), 1e-8);
    EXPECT_GE(matrix_measure(linearize(f, s, r)), -1e-8);
  }
}
