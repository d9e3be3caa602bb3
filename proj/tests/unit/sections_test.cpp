#include <gtest/gtest.h>

#include "rbk/sections.hpp"
#include "test_support.hpp"

namespace rbk {
namespace {

SubvarietyDescriptor sub(SubvarietyKind kind, const MomentPolytope& P, int axis = 0) { return {kind, axis, P}; }

TEST(SectionBasis, LatticePointCounts) {
  for (int m : {1, 3, 8, 20}) {
    EXPECT_EQ(section_basis(MomentPolytope::interval(1), m).size(), std::size_t(m + 1));
    EXPECT_EQ(section_basis(MomentPolytope::rectangle(2, 1), m).size(), std::size_t((2 * m + 1) * (m + 1)));
    EXPECT_EQ(section_basis(MomentPolytope::simplex(1), m).size(), std::size_t((m + 1) * (m + 2) / 2));
  }
  // Rational sides: [0, 3/2] at m = 3 holds 0..4.
  EXPECT_EQ(section_basis(MomentPolytope::interval(Rational(3, 2)), 3).size(), 5u);
}

TEST(SectionBasis, OverflowGuard) {
  EXPECT_EQ(testing::code_of([] { section_basis(MomentPolytope::rectangle(4000, 4000), 1); }), ErrorCode::Overflow);
}

TEST(RestrictionMap, ImageDimensions) {
  const auto rect = MomentPolytope::rectangle(1, 1);
  const auto tri = MomentPolytope::simplex(1);
  const auto rect21 = MomentPolytope::rectangle(2, 1);
  for (int m : {1, 2, 5, 16}) {
    EXPECT_EQ(restriction_map(section_basis(rect, m), sub(SubvarietyKind::DiagonalCurve, rect)).image_dims(),
              std::size_t(2 * m + 1));
    EXPECT_EQ(restriction_map(section_basis(tri, m), sub(SubvarietyKind::LineInP2, tri)).image_dims(), std::size_t(m + 1));
    EXPECT_EQ(restriction_map(section_basis(rect21, m), sub(SubvarietyKind::CoordinateCurve, rect21, 0)).image_dims(),
              std::size_t(m + 1));
    EXPECT_EQ(restriction_map(section_basis(rect21, m), sub(SubvarietyKind::CoordinateCurve, rect21, 1)).image_dims(),
              std::size_t(2 * m + 1));
  }
}

TEST(RestrictionMap, IsSurjectiveAndConsistent) {
  const auto rect = MomentPolytope::rectangle(1, 1);
  const auto rmap = restriction_map(section_basis(rect, 6), sub(SubvarietyKind::DiagonalCurve, rect));
  EXPECT_EQ(rmap.rank(), rmap.image_dims());
  for (std::size_t t = 0; t < rmap.fibers.size(); ++t)
    for (int s : rmap.fibers[t]) EXPECT_EQ(rmap.incidence[static_cast<std::size_t>(s)], static_cast<int>(t));
  const Eigen::MatrixXd R = rmap.matrix();
  EXPECT_DOUBLE_EQ(R.sum(), static_cast<double>(rmap.source.size()));
}

TEST(RestrictionMap, CoordinateCurveKillsMonomialsVanishingOnTheFace) {
  const auto rect = MomentPolytope::rectangle(2, 1);
  const auto rmap = restriction_map(section_basis(rect, 2), sub(SubvarietyKind::CoordinateCurve, rect, 0));
  for (std::size_t k = 0; k < rmap.source.size(); ++k)
    EXPECT_EQ(rmap.incidence[k] < 0, rmap.source.exponents[k][0] > 0);
}

TEST(DimensionSweep, MatchesRestrictedLatticeCount) {
  const auto rect = MomentPolytope::rectangle(1, 1);
  const auto d = sub(SubvarietyKind::DiagonalCurve, rect);
  for (const auto& row : dimension_sweep(rect, d, {1, 2, 4, 8})) {
    EXPECT_EQ(row.image_dim, restricted_lattice_count(d, row.m));
    EXPECT_EQ(row.ambient_dim, std::size_t((row.m + 1) * (row.m + 1)));
  }
}

}  // namespace
}  // namespace rbk
