#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "rbk/geometry.hpp"
#include "test_support.hpp"

namespace rbk {
namespace {

using testing::code_of;

Point fd_gradient(const std::function<double(const Point&)>& f, const Point& t, int dim) {
  Point g = Point::Zero();
  const double h = 1e-5;
  for (int k = 0; k < dim; ++k) {
    Point e = Point::Zero();
    e[k] = h;
    g[k] = (f(t + e) - f(t - e)) / (2 * h);
  }
  return g;
}

TEST(Softplus, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(softplus(800.0), 800.0);
  EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(sigmoid(3.0) + sigmoid(-3.0), 1.0, 1e-15);
}

TEST(ReferenceSymbol, GradientAndHessianMatchFiniteDifferences) {
  const std::vector<ReferenceSymbol> refs{ReferenceSymbol::fubini_study(2.0), ReferenceSymbol::product(1.0, 3.0),
                                          ReferenceSymbol::simplex(1.0), ReferenceSymbol::logistic(2.0, 2.0)};
  const std::vector<Point> pts{Point(0.3, -1.2), Point(-4.0, 2.5), Point(1.7, 0.4)};
  for (const auto& r : refs) {
    for (const Point& t : pts) {
      const int d = r.dim();
      const Point g = fd_gradient([&](const Point& s) { return r.value(s); }, t, d);
      for (int k = 0; k < d; ++k) EXPECT_NEAR(r.gradient(t)[k], g[k], 1e-8);
      for (int k = 0; k < d; ++k) {
        const Point hk = fd_gradient([&](const Point& s) { return r.gradient(s)[k]; }, t, d);
        for (int l = 0; l < d; ++l) EXPECT_NEAR(r.hessian(t)(k, l), hk[l], 1e-7);
      }
    }
  }
}

TEST(ReferenceSymbol, FromMomentInvertsGradient) {
  const std::vector<ReferenceSymbol> refs{ReferenceSymbol::fubini_study(1.0), ReferenceSymbol::product(2.0, 1.0),
                                          ReferenceSymbol::simplex(1.0), ReferenceSymbol::logistic(2.0, 2.0)};
  for (const auto& r : refs) {
    for (const Point& t : {Point(0.1, -0.7), Point(-3.0, 2.0), Point(5.0, 5.0)}) {
      const Point back = r.from_moment(r.gradient(t));
      for (int k = 0; k < r.dim(); ++k) EXPECT_NEAR(back[k], t[k], 1e-9);
    }
  }
}

TEST(ReferenceSymbol, GradientImageIsThePolytope) {
  EXPECT_EQ(ReferenceSymbol::fubini_study(3.0).gradient_polytope(), MomentPolytope::interval(3));
  EXPECT_EQ(ReferenceSymbol::product(2.0, 1.0).gradient_polytope(), MomentPolytope::rectangle(2, 1));
  EXPECT_EQ(ReferenceSymbol::simplex(1.0).gradient_polytope(), MomentPolytope::simplex(1));
  const auto r = ReferenceSymbol::simplex(1.0);
  for (double s : {-9.0, 0.0, 9.0}) EXPECT_TRUE(r.gradient_polytope().contains(r.gradient(Point(s, -s)), 1e-12));
}

TEST(MomentPolytope, VolumesAndMembership) {
  EXPECT_DOUBLE_EQ(MomentPolytope::rectangle(2, 1).normalized_volume(), 4.0);
  EXPECT_DOUBLE_EQ(MomentPolytope::simplex(1).normalized_volume(), 1.0);
  EXPECT_EQ(MomentPolytope::interval(Rational(3, 2)).level(), 2);
  EXPECT_TRUE(MomentPolytope::simplex(1).contains(Exponent{2, 1}, 3));
  EXPECT_FALSE(MomentPolytope::simplex(1).contains(Exponent{2, 2}, 3));
}

TEST(Subvariety, RestrictedPolytopes) {
  SubvarietyDescriptor d{SubvarietyKind::DiagonalCurve, 0, MomentPolytope::rectangle(1, 2)};
  EXPECT_EQ(d.restricted_polytope(), MomentPolytope::interval(3));
  SubvarietyDescriptor c{SubvarietyKind::CoordinateCurve, 0, MomentPolytope::rectangle(2, 1)};
  EXPECT_EQ(c.restricted_polytope(), MomentPolytope::interval(1));
  SubvarietyDescriptor l{SubvarietyKind::LineInP2, 0, MomentPolytope::simplex(1)};
  EXPECT_EQ(l.restricted_polytope(), MomentPolytope::interval(1));
  EXPECT_TRUE(std::isinf(c.embed(0.5)[0]));
}

TEST(Subvariety, IncompatibleKindsRejected) {
  SubvarietyDescriptor bad{SubvarietyKind::DiagonalCurve, 0, MomentPolytope::interval(1)};
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::IncompatibleSubvariety);
  SubvarietyDescriptor line{SubvarietyKind::LineInP2, 0, MomentPolytope::rectangle(1, 1)};
  EXPECT_EQ(code_of([&] { line.validate(); }), ErrorCode::IncompatibleSubvariety);
}

TEST(Perturbation, PullbackFollowsTheChainRule) {
  const Perturbation g({GaussianBump{0.7, Point(0.3, -0.2), 1.3}, TanhTilt{0.2, Point(0.5, -0.25)}});
  SubvarietyDescriptor d{SubvarietyKind::DiagonalCurve, 0, MomentPolytope::rectangle(1, 1)};
  const Perturbation pb = g.pulled_back(d);
  for (double s : {-1.0, 0.2, 2.0}) {
    EXPECT_NEAR(pb.value(Point(s, 0)), g.value(Point(s, s)), 1e-14);
    const Point dir = d.embed_direction();
    EXPECT_NEAR(pb.gradient(Point(s, 0))[0], g.gradient(Point(s, s)).dot(dir), 1e-13);
    EXPECT_NEAR(pb.hessian(Point(s, 0))(0, 0), dir.dot(g.hessian(Point(s, s)) * dir), 1e-13);
  }
}

TEST(Perturbation, BoundedOnlyWithoutPolynomialTerms) {
  EXPECT_TRUE(Perturbation({GaussianBump{}, TanhTilt{}, ConstantTerm{1.0}}).bounded());
  EXPECT_FALSE(Perturbation({AffineTerm{Point(1, 0)}}).bounded());
  EXPECT_FALSE(Perturbation({QuadraticTerm{}}).bounded());
}

TEST(LogGrid, IndexingRoundTrips) {
  const LogGrid g = LogGrid::make(2, 33, 4.0);
  for (std::size_t k : {std::size_t{0}, std::size_t{40}, g.size() - 1}) {
    const auto mi = g.multi_index(k);
    EXPECT_EQ(g.index(mi[0], mi[1]), k);
  }
  EXPECT_DOUBLE_EQ(g.point(g.size() - 1)[1], 4.0);
  EXPECT_EQ(g.refined().n_per_axis, 65);
  EXPECT_EQ(code_of([] { LogGrid::make(1, 32, 12.0).validate(); }), ErrorCode::GridTooCoarse);
  EXPECT_EQ(code_of([] { LogGrid::make(1, 17, 12.0).validate(); }), ErrorCode::GridTooCoarse);
}

TEST(Curvature, DiscreteHessianConvergesToAnalytic) {
  WeightSymbol w;
  w.reference = ReferenceSymbol::product(1.0, 1.0);
  w.perturbation = Perturbation({GaussianBump{0.4, Point::Zero(), 1.0}});
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {65, 129, 257}) {
    const LogGrid g = LogGrid::make(2, n, 6.0);
    const auto samples = sample(w, g);
    const std::size_t k = g.index((n - 1) / 2 + 2, (n - 1) / 2 - 3);
    const double err = (discrete_hessian(g, samples, k) - w.hessian(g.point(k))).norm();
    EXPECT_LT(err, prev / 3.0);
    prev = err;
  }
}

TEST(Model, RestrictedSymbolAgreesWithTheAmbientWeight) {
  WeightSymbol w;
  w.reference = ReferenceSymbol::product(1.0, 1.0);
  w.perturbation = Perturbation({GaussianBump{1.0, Point::Zero(), 1.0}});
  const Model m = testing::make(MomentPolytope::rectangle(1, 1), SubvarietyKind::DiagonalCurve, w, 65);
  for (double s : {-3.0, 0.0, 1.5}) EXPECT_NEAR(m.restricted_symbol().value(Point(s, 0)), w.value(Point(s, s)), 1e-12);

  WeightSymbol s;
  s.reference = ReferenceSymbol::simplex(1.0);
  const Model line = testing::make(MomentPolytope::simplex(1), SubvarietyKind::LineInP2, s, 65);
  for (double t : {-3.0, 0.0, 1.5})
    EXPECT_NEAR(line.restricted_symbol().value(Point(t, 0)), s.value(line.subvariety().embed(t)), 1e-12);
}

}  // namespace
}  // namespace rbk
