#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hcontract/contraction.hpp"
#include "oracles.hpp"

using namespace hcontract;

namespace {

const auto kBasis = so3_basis();
constexpr double kPi = std::numbers::pi;

Matrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (double& x : m.data()) x = g(rng);
  return m;
}

}  // namespace

TEST(MatrixMeasure, Examples) {
  EXPECT_DOUBLE_EQ(matrix_measure(Matrix{{-2, 0}, {0, -1}}), -1.0);
  EXPECT_DOUBLE_EQ(matrix_measure(Matrix{{0, -3}, {3, 0}}), 0.0);
  EXPECT_NEAR(matrix_measure(Matrix{{-1, 2}, {0, -1}}), 0.0, 1e-15);
}

TEST(MatrixMeasure, AgreesWithClosedFormOn2x2) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix p = random_matrix(rng, 2);
    EXPECT_NEAR(matrix_measure(p), oracle::mu2_closed_form(p(0, 0), p(0, 1), p(1, 0), p(1, 1)), 1e-12);
  }
}

TEST(MatrixMeasure, OrthogonalInvariance) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const Matrix p = random_matrix(rng, n);
    const Matrix q = random_orthogonal(n, 1000 + trial);
    EXPECT_NEAR(matrix_measure(q.transpose() * p * q), matrix_measure(p), 1e-10);
  }
}

TEST(MatrixMeasure, SubadditiveAndPositivelyHomogeneous) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const Matrix a = random_matrix(rng, n), b = random_matrix(rng, n);
    EXPECT_LE(matrix_measure(a + b), matrix_measure(a) + matrix_measure(b) + 1e-12);
    EXPECT_NEAR(matrix_measure(2.5 * a), 2.5 * matrix_measure(a), 1e-11);
    EXPECT_NEAR(matrix_measure(a + 3.0 * Matrix::identity(n)), matrix_measure(a) + 3.0, 1e-11);
  }
}

TEST(RandomOrthogonal, IsOrthogonalAndDeterministic) {
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    const Matrix q = random_orthogonal(n, 9);
    EXPECT_LE((q.transpose() * q - Matrix::identity(n)).max_abs(), 1e-14);
    EXPECT_EQ(q, random_orthogonal(n, 9));
  }
  EXPECT_NE(random_orthogonal(3, 1), random_orthogonal(3, 2));
}

TEST(Region, PolarCapLayout) {
  const auto r = Region::polar_cap(1.0, 3, 4, Matrix::identity(3));
  const auto v = r.generator_samples();
  ASSERT_EQ(v.size(), 12u);
  EXPECT_EQ(v[0], (Vector{0.0, 0.0}));
  EXPECT_NEAR(v[4][0], 0.5, 1e-15);
  EXPECT_NEAR(v[9][1], 1.0, 1e-15);
  for (const auto& p : v) EXPECT_TRUE(r.contains(p));
  EXPECT_FALSE(r.contains(Vector{1.1, 0.0}));
}

TEST(Region, BoxIncludesEndpoints) {
  const auto r = Region::box(Vector{-1, 0}, Vector{1, 2}, 3, Matrix::identity(3));
  const auto v = r.generator_samples();
  ASSERT_EQ(v.size(), 9u);
  EXPECT_EQ(v.front(), (Vector{-1, 0}));
  EXPECT_EQ(v.back(), (Vector{1, 2}));
  EXPECT_FALSE(r.contains(Vector{1.5, 1}));
}

TEST(Region, BallIsDeterministicAndInside) {
  const auto r = Region::ball(3, 0.4, 200, 11, Matrix::identity(3));
  const auto v = r.generator_samples();
  ASSERT_EQ(v.size(), 200u);
  EXPECT_EQ(v, Region::ball(3, 0.4, 200, 11, Matrix::identity(3)).generator_samples());
  EXPECT_NE(v, Region::ball(3, 0.4, 200, 12, Matrix::identity(3)).generator_samples());
  for (const auto& p : v) EXPECT_LE(norm2(p), 0.4);
}

TEST(Region, RejectsBadParameters) {
  EXPECT_THROW(Region::polar_cap(1.0, 1, 4, Matrix::identity(3)), std::invalid_argument);
  EXPECT_THROW(Region::polar_cap(-1.0, 3, 4, Matrix::identity(3)), std::invalid_argument);
  EXPECT_THROW(Region::box(Vector{1}, Vector{0}, 3, Matrix::identity(2)), std::invalid_argument);
  EXPECT_THROW(Region::box(Vector{0, 0}, Vector{1}, 3, Matrix::identity(2)), std::invalid_argument);
  EXPECT_THROW(Region::ball(0, 1.0, 10, 0, Matrix::identity(2)), std::invalid_argument);
  EXPECT_THROW(Region::ball(2, 1.0, 0, 0, Matrix::identity(2)), std::invalid_argument);
  EXPECT_THROW(Region::explicit_points({}, 1.0, Matrix::identity(2)), std::invalid_argument);
}

TEST(Certify, EuclideanDiagonalRateIsExact) {
  const auto e = make_euclidean(2);
  const auto f = linear_field(e, Matrix{{-2, 0}, {0, -1}});
  const auto region = Region::box(Vector{-1, -1}, Vector{1, 1}, 5, Matrix::identity(3));
  const auto pass = certify_region(f, e, region, -1.0);
  EXPECT_EQ(pass.verdict, Verdict::Pass);
  EXPECT_EQ(pass.mu_max, -1.0);
  EXPECT_EQ(pass.tolerance, 0.0);
  EXPECT_EQ(pass.argmax_index, 0u);
  EXPECT_EQ(pass.samples_evaluated, 25u);
  EXPECT_EQ(certify_region(f, e, region, -1.5).verdict, Verdict::Fail);
}

TEST(Certify, SO3OpenLoopIsNonexpansive) {
  const auto so3 = make_so3_biinvariant();
  const auto f = open_loop_field(so3, attitude_demo_input);
  CertifyOptions opt;
  opt.time = 1.3;
  const auto cert = certify_region(f, so3, Region::ball(3, kPi / 2, 128, 0, Matrix::identity(3)), 0.0, opt);
  EXPECT_EQ(cert.verdict, Verdict::Pass);
  EXPECT_EQ(cert.mu_max, 0.0);
  EXPECT_TRUE(cert.nonexpansive_only());
}

TEST(Certify, SphereGradientCaps) {
  const auto s = make_sphere2();
  const auto f = sphere_height_gradient(s);
  const auto cap60 = certify_region(f, s, Region::polar_cap(kPi / 3, 16, 16, Matrix::identity(3)), -0.49);
  EXPECT_EQ(cap60.verdict, Verdict::Pass);
  EXPECT_NEAR(cap60.mu_max, -0.5, 1e-7);
  EXPECT_EQ(cap60.tolerance, 1e-7);
  EXPECT_NEAR(norm2(cap60.sample_coords[cap60.argmax_index]), kPi / 3, 1e-12);

  const double edge = 89.9 * kPi / 180;
  const auto cap899 = certify_region(f, s, Region::polar_cap(edge, 16, 16, Matrix::identity(3)), 0.0);
  EXPECT_EQ(cap899.verdict, Verdict::Pass);
  EXPECT_NEAR(cap899.mu_max, -std::cos(edge), 1e-7);
  EXPECT_LT(cap899.mu_max, 0.0);
  EXPECT_EQ(certify_region(f, s, Region::polar_cap(edge, 16, 16, Matrix::identity(3)), -0.01).verdict,
            Verdict::Fail);
}

TEST(Certify, VerdictIsMonotoneInRate) {
  const auto s = make_sphere2();
  const auto f = sphere_spiral(s);
  const auto region = Region::polar_cap(1.0, 8, 8, Matrix::identity(3));
  const auto base = certify_region(f, s, region, 0.0);
  for (double c : {-0.8, -0.6, -0.5, -0.3, 0.0, 0.2}) {
    const auto cert = certify_region(f, s, region, c);
    EXPECT_EQ(cert.mu_max, base.mu_max);
    EXPECT_EQ(cert.verdict == Verdict::Pass, base.mu_max <= c + 1e-7) << c;
  }
}

TEST(Certify, ThreadCountDoesNotChangeResults) {
  const auto s = make_sphere2();
  const auto f = sphere_spiral(s);
  const auto region = Region::polar_cap(1.2, 12, 12, Matrix::identity(3));
  CertifyOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = certify_region(f, s, region, 0.0, one);
  const auto b = certify_region(f, s, region, 0.0, many);
  EXPECT_EQ(a.sample_mu, b.sample_mu);
  EXPECT_EQ(a.argmax_index, b.argmax_index);
}

TEST(Certify, RejectsInconsistentInputs) {
  const auto s = make_sphere2();
  const auto f = sphere_height_gradient(s);
  EXPECT_THROW(certify_region(f, s, Region::ball(3, 1.0, 8, 0, Matrix::identity(3)), 0.0), std::invalid_argument);
  EXPECT_THROW(certify_region(f, s, Region::ball(2, 1.0, 8, 0, 2.0 * Matrix::identity(3)), 0.0),
               std::invalid_argument);
  EXPECT_THROW(certify_region(f, s, Region::ball(2, 1.0, 8, 0, Matrix::identity(3)), NAN), std::invalid_argument);
  EXPECT_THROW(certify_region(f, s, Region::explicit_points({Vector{2.0, 0.0}}, 1.0, Matrix::identity(3)), 0.0),
               std::invalid_argument);
}

TEST(BasisIndependence, HoldsForDemoFields) {
  const auto s = make_sphere2();
  const auto so3 = make_so3_left_invariant(Vector{1, 1, 4});
  std::mt19937_64 rng(54);
  const auto r1 = basis_independence_check(sphere_spiral(s), s, oracle::random_rotation(rng), 10);
  EXPECT_TRUE(r1.pass);
  EXPECT_EQ(r1.mu.size(), 11u);
  const auto r2 = basis_independence_check(constant_field(so3, Vector{0.2, -0.5, 1.0}), so3,
                                           oracle::random_rotation(rng), 10);
  EXPECT_TRUE(r2.pass);
}

TEST(FindPeriod, Examples) {
  EXPECT_NEAR(*find_period(kBasis[2]), 2 * kPi, 1e-9);
  EXPECT_NEAR(*find_period(2.0 * kBasis[0]), kPi, 1e-9);
  EXPECT_NEAR(*find_period(so2_generator()), 2 * kPi, 1e-9);
  const auto e = make_euclidean(2);
  EXPECT_FALSE(find_period(e.dec().m_basis()[0]).has_value());
  EXPECT_THROW(find_period(Matrix(3, 3)), std::invalid_argument);
  EXPECT_THROW(find_period(Matrix(2, 3)), std::invalid_argument);
}

TEST(BasisWithFirst, IsOrthonormalAndStartsWithTheGenerator) {
  const auto s = make_sphere2();
  const Matrix a = 3.0 * kBasis[0] + 4.0 * kBasis[1];
  const auto b = basis_with_first(s, a);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_LE((b[0] - 0.2 * a).max_abs(), 1e-15);
  const auto& metric = s.dec().metric();
  EXPECT_NEAR(metric(b[0], b[1]), 0.0, 1e-15);
  EXPECT_NEAR(metric(b[1], b[1]), 1.0, 1e-15);
  EXPECT_THROW(basis_with_first(s, kBasis[2]), std::invalid_argument);
}

TEST(LoopCheck, SphereGradientOnAGreatCircle) {
  const auto s = make_sphere2();
  const auto rep = loop_obstruction_check(sphere_height_gradient(s), s, kBasis[0], Matrix::identity(3));
  EXPECT_NEAR(rep.period, 2 * kPi, 1e-9);
  EXPECT_EQ(rep.t.size(), 1024u);  // periodic rule: nodes on [0, T)
  EXPECT_NEAR(rep.integral, 0.0, 1e-6);
  EXPECT_NEAR(rep.max_f, 1.0, 1e-6);
  EXPECT_NEAR(rep.argmax_t, kPi, 1e-2);
  for (std::size_t k = 0; k < rep.t.size(); k += 97) EXPECT_NEAR(rep.f[k], -std::cos(rep.t[k]), 1e-6);
  EXPECT_FALSE(rep.inconsistent);
}

TEST(LoopCheck, ClaimedNegativeRateIsInconsistentOnlyWhenEverySampleAgrees) {
  const auto s = make_sphere2();
  LoopOptions opt;
  opt.claimed_c = -0.1;
  const auto rep = loop_obstruction_check(sphere_spiral(s), s, kBasis[1], Matrix::identity(3), opt);
  EXPECT_FALSE(rep.inconsistent);
  EXPECT_GE(rep.max_f, -1e-8);

  // A field that is not smooth along the loop can fake a contracting sample set.
  HorizontalField fake;
  fake.name = "fake";
  fake.space = s.name();
  fake.m = 2;
  fake.coeff = [](const Matrix&, double) { return Vector{0.0, 0.0}; };
  fake.lie_derivatives = [](const Matrix&, double) { return Matrix{{-1.0, 0.0}, {0.0, -1.0}}; };
  const auto bad = loop_obstruction_check(fake, s, kBasis[0], Matrix::identity(3), opt);
  EXPECT_TRUE(bad.inconsistent);
}

TEST(LoopCheck, CircleFieldReachesItsMaximum) {
  const auto c = make_circle();
  const auto f = circle_field(c, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
  const auto rep = loop_obstruction_check(f, c, so2_generator(), Matrix::identity(2));
  EXPECT_NEAR(rep.max_f, 1.0, 1e-8);
  EXPECT_NEAR(rep.integral, 0.0, 1e-10);
  EXPECT_NEAR(rep.integral_half, 0.0, 1e-10);
}

TEST(LoopCheck, RejectsGeneratorsOutsideM) {
  const auto s = make_sphere2();
  EXPECT_THROW(loop_obstruction_check(sphere_rotation(s), s, kBasis[2], Matrix::identity(3)), std::invalid_argument);
  const auto e = make_euclidean(2);
  EXPECT_THROW(loop_obstruction_check(linear_field(e, Matrix::identity(2)), e, e.dec().m_basis()[0],
                                      Matrix::identity(3)),
               std::invalid_argument);
}
