#include <gtest/gtest.h>

#include <sstream>

#include "hcontract/contraction.hpp"
#include "hcontract/table_field.hpp"

using namespace hcontract;

namespace {

std::vector<Matrix> euclidean_grid(const SpaceDescriptor& e, int per_axis, double spacing) {
  std::vector<Matrix> pts;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      pts.push_back(expm(e.dec().m_combination(Vector{spacing * (i - per_axis / 2), spacing * (j - per_axis / 2)})));
  return pts;
}

}  // namespace

TEST(CoefficientTable, ReadsTheDocumentedLayout) {
  std::istringstream in(
      "g00,g01,g02,g10,g11,g12,g20,g21,g22,x1,x2\n"
      "1,0,0.5,0,1,-1,0,0,1,2.5,-3\n"
      "\n"
      "1,0,0,0,1,0,0,0,1,0,0\n");
  const auto t = read_coefficient_table(in, 3, 2);
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.points[0], (Matrix{{1, 0, 0.5}, {0, 1, -1}, {0, 0, 1}}));
  EXPECT_EQ(t.values[0], (Vector{2.5, -3}));
}

TEST(CoefficientTable, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_coefficient_table(empty, 3, 2), std::invalid_argument);
  std::istringstream header("g00,g01,x1\n1,0,0\n");
  EXPECT_THROW(read_coefficient_table(header, 3, 2), std::invalid_argument);
  std::istringstream width("g00,g01,g02,g10,g11,g12,g20,g21,g22,x1,x2\n1,0,0,0,1,0,0,0,1,0\n");
  EXPECT_THROW(read_coefficient_table(width, 3, 2), std::invalid_argument);
  std::istringstream number("g00,g01,g02,g10,g11,g12,g20,g21,g22,x1,x2\n1,0,0,0,1,0,0,0,1,0,1x\n");
  EXPECT_THROW(read_coefficient_table(number, 3, 2), std::invalid_argument);
  std::istringstream rows("g00,g01,g02,g10,g11,g12,g20,g21,g22,x1,x2\n");
  EXPECT_THROW(read_coefficient_table(rows, 3, 2), std::invalid_argument);
}

TEST(CoefficientTable, WriteReadRoundTripIsExact) {
  const auto s = make_sphere2();
  std::vector<Matrix> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(expm(s.dec().m_combination(Vector{0.05 * i, -0.03 * i + 0.1})));
  const auto t = tabulate(sphere_spiral(s), pts);
  std::stringstream buf;
  write_coefficient_table(buf, t);
  const auto back = read_coefficient_table(buf, 3, 2);
  ASSERT_EQ(back.points.size(), t.points.size());
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    EXPECT_EQ(back.points[i], t.points[i]);
    EXPECT_EQ(back.values[i], t.values[i]);
  }
}

TEST(TableField, ReproducesLinearFieldOnTheGrid) {
  const auto e = make_euclidean(2);
  const Matrix m{{-1.0, 0.4}, {-0.2, -0.5}};
  const auto exact = linear_field(e, m);
  const auto f = table_field(e, tabulate(exact, euclidean_grid(e, 9, 0.25)));
  for (const Vector v : {Vector{0.0, 0.0}, Vector{0.13, -0.41}, Vector{-0.7, 0.6}}) {
    const Matrix g = expm(e.dec().m_combination(v));
    const Vector a = f.eval(g), b = exact.eval(g);
    EXPECT_NEAR(a[0], b[0], 1e-10);
    EXPECT_NEAR(a[1], b[1], 1e-10);
    EXPECT_LE((linearize(f, e, g).mat - m).max_abs(), 1e-6);
  }
  EXPECT_FALSE(f.has_analytic_derivatives());
}

TEST(TableField, CertifiesLikeTheFieldItSamples) {
  const auto e = make_euclidean(2);
  const Matrix m{{-2.0, 0.0}, {0.0, -1.0}};
  const auto f = table_field(e, tabulate(linear_field(e, m), euclidean_grid(e, 9, 0.25)));
  const auto region = Region::ball(2, 0.5, 64, 3, Matrix::identity(3));
  const auto cert = certify_region(f, e, region, -1.0);
  EXPECT_EQ(cert.verdict, Verdict::Pass);
  EXPECT_NEAR(cert.mu_max, -1.0, 1e-6);
}

TEST(TableField, ApproximatesTheSphereGradient) {
  const auto s = make_sphere2();
  const auto exact = sphere_height_gradient(s);
  std::vector<Matrix> pts;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) pts.push_back(expm(s.dec().m_combination(Vector{0.02 * i, 0.02 * j})));
  const auto f = table_field(s, tabulate(exact, pts));
  const Matrix g = expm(s.dec().m_combination(Vector{0.05, -0.03}));
  EXPECT_LE((linearize(f, s, g).mat - linearize(exact, s, g).mat).max_abs(), 0.05);
}

TEST(TableField, RejectsMismatchedTables) {
  const auto e = make_euclidean(3);
  const auto s = make_sphere2();
  const auto t = tabulate(linear_field(e, Matrix::identity(3)), {Matrix::identity(4)});
  EXPECT_THROW(table_field(s, t), std::invalid_argument);
  EXPECT_THROW(tabulate(sphere_rotation(s), {}), std::invalid_argument);
}
