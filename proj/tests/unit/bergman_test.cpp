#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rbk/bergman.hpp"
#include "rbk/quadrature.hpp"
#include "rbk/sections.hpp"
#include "test_support.hpp"

namespace rbk {
namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

WeightSymbol symbol(const ReferenceSymbol& r, const Perturbation& g = {}) {
  WeightSymbol w;
  w.reference = r;
  w.perturbation = g;
  return w;
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  std::vector<double> x, w;
  gauss_legendre_unit(16, x, w);
  for (int k = 0; k <= 31; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14);
  }
}

TEST(Quadrature, ReferenceMassIsNormalizedVolume) {
  for (const auto& r : {ReferenceSymbol::fubini_study(2.0), ReferenceSymbol::product(2.0, 1.0), ReferenceSymbol::simplex(1.0)}) {
    const auto rule = reference_rule(r);
    double s = 0;
    for (double w : rule.weights) s += w;
    EXPECT_NEAR(s, r.gradient_polytope().normalized_volume(), 1e-12);
  }
}

// Against FS on P^1 the Gram is diagonal with G_kk = k!(m-k)!/(m+1)!.
TEST(Gram, FubiniStudyMatchesBetaIntegrals) {
  const auto w = symbol(ReferenceSymbol::fubini_study(1.0));
  for (int m : {1, 7, 64}) {
    std::vector<Exponent> ex;
    for (int k = 0; k <= m; ++k) ex.push_back({k, 0});
    const GramMatrix g = gram_of(w, ex, m);
    for (int k = 0; k <= m; ++k) {
      const double expected = log_factorial(k) + log_factorial(m - k) - log_factorial(m + 1);
      EXPECT_NEAR(g.log_diagonal(static_cast<std::size_t>(k)), expected, 1e-11) << "m=" << m << " k=" << k;
    }
  }
}

// Against FS on P^2: 2 a! b! (m-a-b)! / (m+2)!.
TEST(Gram, SimplexMatchesDirichletIntegrals) {
  const auto w = symbol(ReferenceSymbol::simplex(1.0));
  const int m = 12;
  std::vector<Exponent> ex;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b) ex.push_back({a, b});
  const GramMatrix g = gram_of(w, ex, m);
  for (std::size_t k = 0; k < ex.size(); ++k) {
    const int a = static_cast<int>(ex[k][0]), b = static_cast<int>(ex[k][1]);
    const double expected = std::log(2.0) + log_factorial(a) + log_factorial(b) + log_factorial(m - a - b) - log_factorial(m + 2);
    EXPECT_NEAR(g.log_diagonal(k), expected, 1e-10);
  }
}

TEST(Gram, RefinedRuleAgreesOnPerturbedWeight) {
  const auto w = symbol(ReferenceSymbol::fubini_study(1.0), Perturbation({GaussianBump{0.5, Point::Zero(), 1.0}}));
  std::vector<Exponent> ex;
  for (int k = 0; k <= 32; ++k) ex.push_back({k, 0});
  const GramMatrix a = gram_of(w, ex, 32);
  const GramMatrix b = gram_of(w, ex, 32, QuadratureOptions{}.refined());
  for (std::size_t k = 0; k < ex.size(); ++k) EXPECT_NEAR(a.log_diagonal(k), b.log_diagonal(k), 1e-11);
}

TEST(Orthonormalize, RandomSpdMatrices) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  for (int n : {3, 10, 25}) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = N(rng);
    const Eigen::MatrixXd G = A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    const OrthonormalTransform onb = orthonormalize(GramMatrix::from_matrix(G));
    const Eigen::MatrixXd C = onb.matrix();
    EXPECT_LT((C.transpose() * G * C - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1.0, 2.0);
    EXPECT_LT((G * onb.solve(b) - b).norm(), 1e-9);
  }
}

TEST(Orthonormalize, RejectsIndefiniteAndIllConditioned) {
  Eigen::MatrixXd G(2, 2);
  G << 1, 2, 2, 1;
  EXPECT_EQ(testing::code_of([&] { orthonormalize(GramMatrix::from_matrix(G)); }), ErrorCode::NotPositiveDefinite);
  G << 1, 0, 0, 1e-16;
  EXPECT_EQ(testing::code_of([&] { orthonormalize(GramMatrix::from_matrix(G)); }), ErrorCode::IllConditioned);
}

TEST(Kernel, FubiniStudyIsConstant) {
  const Model model = testing::shipped("p1_fs");
  for (int m : {1, 5, 33}) {
    const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
    const auto k = kernel_eval(model, rmap, orthonormalize(gram(model, rmap, m)), m, model.z_grid());
    for (double b : k.values) EXPECT_NEAR(b, m + 1.0, 1e-9);
  }
}

TEST(Kernel, TraceIsImageDimension) {
  for (const char* id : {"p1_bump", "diag_bump", "coord_rect"}) {
    const Model model = testing::shipped(id);
    for (int m : {3, 17}) {
      const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
      const double tr = kernel_trace(model, rmap, orthonormalize(gram(model, rmap, m)), m);
      EXPECT_NEAR(tr, static_cast<double>(rmap.image_dims()), 1e-9 * rmap.image_dims()) << id;
    }
  }
}

TEST(Kernel, EqualsRayleighMaximum) {
  const Model model = testing::shipped("diag_bump");
  const int m = 9;
  const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
  const GramMatrix g = gram(model, rmap, m);
  for (double t : {-2.0, 0.0, 0.7}) EXPECT_LT(extremal_check(model, rmap, g, m, Point(t, 0)).relative_gap, 1e-9);
}

TEST(Kernel, DenseAndDiagonalPathsAgree) {
  const Model model = testing::shipped("p1_bump");
  const int m = 12;
  const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
  const GramMatrix g = gram(model, rmap, m);
  const OrthonormalTransform diag = orthonormalize(g);
  const OrthonormalTransform dense = orthonormalize(GramMatrix::from_matrix(g.dense()));
  for (double t : {-4.0, 0.0, 2.5}) {
    const double a = log_kernel(model.restricted_symbol(), rmap.target_exponents, diag, m, Point(t, 0));
    const double b = log_kernel(model.restricted_symbol(), rmap.target_exponents, dense, m, Point(t, 0));
    EXPECT_NEAR(a, b, 1e-10);
  }
}

TEST(FsPotential, FubiniStudyShiftsByLogOfDimension) {
  const Model model = testing::shipped("p1_fs");
  const int m = 8;
  const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
  const FsPotential um = fs_potential(model, rmap, m, model.z_grid());
  for (std::size_t i = 0; i < um.values.size(); ++i)
    EXPECT_NEAR(um.values[i], model.z_samples()[i] + std::log(m + 1.0) / m, 1e-11);
}

// Minimal-norm extension via the KKT system [Gx R^T; R 0] [x; l] = [0; s].
TEST(Extension, MatchesKktSolution) {
  const Model model = testing::shipped("diag_bump");
  const int m = 4;
  const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
  const Eigen::MatrixXd Gx = ambient_gram(model, rmap).dense();
  const Eigen::MatrixXd R = rmap.matrix();
  const auto n = Gx.rows(), k = R.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + k, n + k);
  K.topLeftCorner(n, n) = Gx;
  K.topRightCorner(n, k) = R.transpose();
  K.bottomLeftCorner(k, n) = R;
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(k, 1.0, 2.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
  rhs.tail(k) = s;
  const Eigen::VectorXd x = K.fullPivLu().solve(rhs).head(n);
  const ExtensionResult ext = minimal_norm_extension(model, rmap, m, s);
  EXPECT_LT((ext.coefficients - x).norm(), 1e-9 * x.norm());
  EXPECT_LT((R * ext.coefficients - s).norm(), 1e-12);
}

TEST(Extension, DenseReportMatchesClosedForm) {
  const Model model = testing::shipped("diag_fs");
  for (int m : {2, 6}) {
    const auto rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
    const auto fast = extension_report(model, rmap, m);
    const auto dense = extension_report_dense(gram(model, rmap, m), ambient_gram(model, rmap), rmap.matrix());
    EXPECT_NEAR(fast.operator_norm, dense.operator_norm, 1e-9 * fast.operator_norm);
    // Product FS restricted to the diagonal: (2m+1)/(m+1)^2.
    EXPECT_NEAR(fast.operator_norm, (2.0 * m + 1) / ((m + 1.0) * (m + 1.0)), 1e-10);
  }
}

TEST(Extension, AmbientIsIdentity) {
  const Model model = testing::shipped("p1_bump");
  const auto rmap = restriction_map(section_basis(model.polytope(), 5), model.subvariety());
  const auto rep = extension_report(model, rmap, 5);
  EXPECT_NEAR(rep.operator_norm, 1.0, 1e-12);
}

}  // namespace
}  // namespace rbk
