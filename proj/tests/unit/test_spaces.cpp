#include <gtest/gtest.h>

#include <random>

#include "hcontract/io.hpp"
#include "hcontract/spaces.hpp"

using namespace hcontract;

TEST(Spaces, SphereTangentActionAtIdentity) {
  const auto s = make_sphere2();
  const Vector x = tangent_action(s, Matrix::identity(3), 0);
  const Vector y = tangent_action(s, Matrix::identity(3), 1);
  EXPECT_EQ(x, (Vector{0, -1, 0}));
  EXPECT_EQ(y, (Vector{1, 0, 0}));
  EXPECT_DOUBLE_EQ(dot(x, y), 0.0);
  EXPECT_DOUBLE_EQ(norm2(x), 1.0);
  EXPECT_DOUBLE_EQ(norm2(y), 1.0);
  EXPECT_THROW(tangent_action(s, Matrix::identity(3), 2), std::invalid_argument);
}

TEST(Spaces, EveryDescriptorIsAdInvariant) {
  for (const auto& s : {make_euclidean(2), make_circle(), make_sphere2(), make_so3_biinvariant(),
                        make_so3_left_invariant(Vector{1, 1, 4})}) {
    const auto rep = check_ad_invariance(s.dec(), s.h_samples());
    EXPECT_TRUE(rep.pass) << s.name();
    EXPECT_TRUE(rep.metric_invariant) << s.name();
  }
}

TEST(Spaces, SphereIsotropySamplerHas16DistinctAngles) {
  const auto hs = make_sphere2().h_samples();
  ASSERT_EQ(hs.size(), 16u);
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) EXPECT_GT((hs[i] - hs[j]).max_abs(), 1e-3);
}

TEST(Spaces, SphereOrbitStaysOnTheSphere) {
  const auto s = make_sphere2();
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = s.dec().m_combination(Vector{g(rng), g(rng)});
    for (double t : {0.1, 1.0, 7.3, -4.0}) EXPECT_NEAR(norm2(project_point(s, expm(t * a))), 1.0, 1e-14);
  }
}

TEST(Spaces, EuclideanMetricIsTheDotProduct) {
  const auto e = make_euclidean(3);
  const auto& m = e.dec().m_basis();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(e.dec().metric()(m[i], m[j]), i == j ? 1.0 : 0.0);
  EXPECT_EQ(e.name(), "euclidean:3");
  const Matrix g = expm(e.dec().m_combination(Vector{1, -2, 3}));
  EXPECT_EQ(project_point(e, g), (Vector{1, -2, 3, 1}));
}

TEST(Spaces, MakeSpaceParsesNames) {
  EXPECT_EQ(make_space("sphere2").kind(), SpaceKind::Sphere2);
  EXPECT_EQ(make_space("so3").kind(), SpaceKind::SO3BiInvariant);
  EXPECT_EQ(make_space("circle").kind(), SpaceKind::Circle);
  EXPECT_EQ(make_space("euclidean:4").m_dim(), 4u);
  EXPECT_EQ(make_space("so3-left:1,1,4").kind(), SpaceKind::SO3LeftInvariant);
  EXPECT_THROW(make_space("torus"), std::invalid_argument);
  EXPECT_THROW(make_space("euclidean:0"), std::invalid_argument);
  EXPECT_THROW(make_space("so3-left:1,-1,4"), std::invalid_argument);
}

TEST(Spaces, WithMBasisRecomputesAlpha) {
  const auto so3 = make_so3_biinvariant();
  const auto& b = so3.dec().m_basis();
  const auto swapped = so3.with_m_basis({b[1], b[0], b[2]});
  EXPECT_NEAR(swapped.alpha()(2, 0, 1), -0.5, 1e-15);  // [A_Y, A_X] = -A_Z
}

TEST(Spaces, StoredAlphaMustAgree) {
  const auto so3 = make_so3_biinvariant();
  AlphaTensor wrong = so3.alpha();
  wrong(0, 1, 2) = 3.0;
  EXPECT_THROW(SpaceDescriptor("so3", SpaceKind::SO3BiInvariant, so3.dec(), wrong), std::invalid_argument);
}

TEST(Spaces, JsonRoundTripIsBitExact) {
  for (const auto& s : {make_euclidean(2), make_circle(), make_sphere2(), make_so3_biinvariant(),
                        make_so3_left_invariant(Vector{1, 1, 4}), make_so3_left_invariant(Vector{0.3, 1.7, 2.9})}) {
    const json j = space_to_json(s);
    const SpaceDescriptor back = space_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.alpha(), s.alpha()) << s.name();
    for (std::size_t i = 0; i < s.m_dim(); ++i) EXPECT_EQ(back.dec().m_basis()[i], s.dec().m_basis()[i]);
    EXPECT_EQ(space_to_json(back).dump(), j.dump()) << s.name();
    EXPECT_EQ(back.classification().is_symmetric, s.classification().is_symmetric);
  }
}

TEST(Spaces, JsonRejectsInconsistentDescriptors) {
  json j = space_to_json(make_sphere2());
  j["alpha"][0][0][1] = 0.25;
  EXPECT_THROW(space_from_json(j), std::invalid_argument);
  json k = space_to_json(make_sphere2());
  k["flags"]["symmetric"] = false;
  EXPECT_THROW(space_from_json(k), std::invalid_argument);
  json l = space_to_json(make_sphere2());
  l.erase("m_basis");
  EXPECT_THROW(space_from_json(l), std::invalid_argument);
}
