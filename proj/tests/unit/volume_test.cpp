#include <gtest/gtest.h>

#include "rbk/envelope.hpp"
#include "rbk/sections.hpp"
#include "rbk/volume.hpp"
#include "test_support.hpp"

namespace rbk {
namespace {

std::vector<DimensionRow> rows_of(const std::function<std::size_t(int)>& f, const std::vector<int>& ms) {
  std::vector<DimensionRow> out;
  for (int m : ms) out.push_back({m, 0, f(m)});
  return out;
}

TEST(VolumeFromDims, ExactForPolynomialCounts) {
  const std::vector<int> ms{1, 2, 4, 8, 16, 32, 64};
  auto fit = volume_from_dims(rows_of([](int m) { return std::size_t(2 * m + 1); }, ms), 1);
  ASSERT_TRUE(fit.exact);
  EXPECT_EQ(*fit.exact, Rational(2));
  fit = volume_from_dims(rows_of([](int m) { return std::size_t((m + 1) * (m + 2) / 2); }, ms), 2);
  ASSERT_TRUE(fit.exact);
  EXPECT_EQ(*fit.exact, Rational(1));
  fit = volume_from_dims(rows_of([](int m) { return std::size_t(3 * m / 2 + 1); }, {2, 4, 8, 16, 32}), 1);
  EXPECT_EQ(*fit.exact, Rational(3, 2));
}

TEST(VolumeFromDims, NonPolynomialCountsAreNotExact) {
  const auto fit = volume_from_dims(rows_of([](int m) { return std::size_t(m + 1 + (m % 3 == 0)); }, {1, 2, 3, 8, 16, 32}), 1);
  EXPECT_FALSE(fit.exact);
  EXPECT_NEAR(fit.value, 1.0, 0.05);
}

TEST(VolumeFromDims, InsufficientSweep) {
  EXPECT_EQ(testing::code_of([] { volume_from_dims({{1, 0, 2}, {64, 0, 65}}, 1); }), ErrorCode::InsufficientSweep);
  EXPECT_EQ(testing::code_of([] { volume_from_dims({{1, 0, 2}, {2, 0, 3}, {16, 0, 17}}, 1); }), ErrorCode::InsufficientSweep);
}

TEST(FundamentalProbe, FubiniStudyConstantIsClosedForm) {
  const Model model = testing::shipped("p1_fs");
  const auto env = equilibrium_envelope(model, true);
  const auto probe = fundamental_inequality_probe(model, env, std::vector<int>{8, 16, 32, 64});
  // B = m + 1 everywhere and Pu = u, so C = max_m (m + 1) / m = 9/8.
  EXPECT_NEAR(probe.fitted_c, 9.0 / 8.0, 1e-9);
  EXPECT_EQ(probe.argmax_m, 8);
}

TEST(FundamentalProbe, BumpConstantIsFinite) {
  const Model model = testing::shipped("p1_bump");
  const auto probe = fundamental_inequality_probe(model, equilibrium_envelope(model, true), std::vector<int>{8, 16});
  EXPECT_GT(probe.fitted_c, 1.0);
  EXPECT_LT(probe.fitted_c, 1e3);
}

TEST(MovingIntersection, FubiniStudyHasFullMass) {
  const Model model = testing::shipped("p1_fs");
  for (int m : {1, 8}) {
    const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
    EXPECT_NEAR(moving_intersection(model, rmap, m), 1.0, 1e-8);
  }
}

TEST(Invariance, SameClassSameVolume) {
  const Model a = testing::shipped("diag_fs");
  const Model b = a.with_perturbation(Perturbation({GaussianBump{0.05, Point::Zero(), 1.0}}));
  const auto r = invariance_check(a, b);
  EXPECT_LT(r.gap, 1e-6);
  EXPECT_EQ(testing::code_of([&] { invariance_check(a, testing::shipped("p1_fs")); }), ErrorCode::ValidationError);
}

TEST(AssembleReport, DiagonalBumpAgreesThreeWays) {
  const Model model = testing::shipped("diag_bump");
  const auto rep = assemble_report("diag_bump", model, {1, 2, 4, 8, 16, 32});
  ASSERT_TRUE(rep.vol_from_dims.exact);
  EXPECT_EQ(*rep.vol_from_dims.exact, Rational(2));
  EXPECT_NEAR(rep.vol_from_ma_restricted, 2.0, 1e-6);
  EXPECT_NEAR(rep.vol_from_ma_ambient_pullback, 2.0, 1e-6);
  EXPECT_TRUE(rep.three_way_agreement);
  EXPECT_NEAR(rep.moving.back().mass, 2.0, 1e-6);
}

}  // namespace
}  // namespace rbk
