#include <random>

#include <boost/rational.hpp>
#include <gtest/gtest.h>

#include "rbk/exact/hull.hpp"
#include "rbk/exact/predicates.hpp"

namespace rbk::exact {
namespace {

// Heights that are dyadic rationals with small denominators are exact in
// double and in boost::rational<int64>, which then serves as the oracle.
using Q = boost::rational<std::int64_t>;

Q to_q(double z) { return Q(static_cast<std::int64_t>(std::ldexp(z, 20)), std::int64_t{1} << 20); }

int sign(Q v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

TEST(Predicates, Orient2MatchesRationalArithmetic) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> xi(-20, 20), zi(-4096, 4096);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<std::int64_t, 3> x{xi(rng), xi(rng), xi(rng)};
    std::array<double, 3> z{zi(rng) / 1024.0, zi(rng) / 1024.0, zi(rng) / 1024.0};
    if (trial % 3 == 0) z[2] = z[0] + (z[1] - z[0]) * 0.5, x[2] = (x[0] + x[1]) / 2, x[0] = x[2] * 2 - x[1];
    const Q det = Q(x[1] - x[0]) * (to_q(z[2]) - to_q(z[0])) - Q(x[2] - x[0]) * (to_q(z[1]) - to_q(z[0]));
    EXPECT_EQ(orient2(x, z), sign(det));
  }
}

TEST(Predicates, Orient3MatchesRationalArithmetic) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> xi(-9, 9), zi(-2048, 2048);
  auto pt = [&] { return LiftedPoint{xi(rng), xi(rng), zi(rng) / 1024.0}; };
  for (int trial = 0; trial < 2000; ++trial) {
    const LiftedPoint a = pt(), b = pt(), c = pt();
    LiftedPoint d = pt();
    if (trial % 4 == 0) d.z = a.z;  // frequent near-degenerate cases
    auto row = [&](const LiftedPoint& p) { return std::array<Q, 3>{Q(p.x - a.x), Q(p.y - a.y), to_q(p.z) - to_q(a.z)}; };
    const auto u = row(b), v = row(c), w = row(d);
    const Q det = w[0] * (u[1] * v[2] - u[2] * v[1]) - w[1] * (u[0] * v[2] - u[2] * v[0]) + w[2] * (u[0] * v[1] - u[1] * v[0]);
    EXPECT_EQ(orient3(a, b, c, d), sign(det));
  }
}

TEST(Predicates, ExactOnTinyPerturbations) {
  // 1 + 2^-52 vs 1: a naive cofactor expansion loses the perturbation.
  const double e = std::ldexp(1.0, -52);
  EXPECT_EQ(orient2({0, 1, 2}, {1.0, 1.0, 1.0 + e}), 1);
  EXPECT_EQ(orient2({0, 1, 2}, {1.0, 1.0, 1.0}), 0);
  EXPECT_EQ(orient2({0, 1, 2}, {1e20, 1e20 + 16384, 1e20 + 32768}), 0);
}

std::vector<std::size_t> brute_force_1d(const std::vector<double>& z) {
  std::vector<std::size_t> out;
  const std::int64_t n = static_cast<std::int64_t>(z.size());
  for (std::int64_t k = 0; k < n; ++k) {
    bool vertex = true;
    for (std::int64_t i = 0; i < k && vertex; ++i)
      for (std::int64_t j = k + 1; j < n && vertex; ++j)
        if (orient2({i, k, j}, {z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(k)], z[static_cast<std::size_t>(j)]}) <= 0) vertex = false;
    if (vertex) out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

TEST(LowerHull1D, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> zi(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(2 + trial % 30);
    for (auto& v : z) v = zi(rng) / 8.0;
    EXPECT_EQ(lower_hull_1d(z), brute_force_1d(z)) << "trial " << trial;
  }
}

TEST(LowerHull1D, CollinearPointsAreNotVertices) {
  EXPECT_EQ(lower_hull_1d({0, 1, 2, 3, 4}), (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(lower_hull_1d({4, 1, 0, 1, 4}), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(LowerHull2D, MatchesBruteForceOnRandomGrids) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> zi(-40, 40);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 5;
    std::vector<double> z(static_cast<std::size_t>(n * n));
    for (auto& v : z) v = zi(rng) / 4.0;
    const auto hull = lower_hull_2d(n, z, 1000 + static_cast<std::uint64_t>(trial));
    EXPECT_EQ(hull.is_vertex, brute_force_lower_vertices(n, z)) << "trial " << trial;
  }
}

TEST(LowerHull2D, ConvexDataKeepsEveryPointAndAffineDataOnlyCorners) {
  const int n = 9;
  std::vector<double> bowl, plane;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bowl.push_back((i - 4.0) * (i - 4.0) + 2.0 * (j - 3.0) * (j - 3.0));
      plane.push_back(0.5 * i - 0.25 * j);
    }
  const auto b = lower_hull_2d(n, bowl);
  EXPECT_EQ(std::count(b.is_vertex.begin(), b.is_vertex.end(), true), n * n);
  EXPECT_EQ(b.facets.size(), std::size_t(2 * (n - 1) * (n - 1)));
  const auto p = lower_hull_2d(n, plane);
  EXPECT_EQ(std::count(p.is_vertex.begin(), p.is_vertex.end(), true), 4);
}

TEST(LowerHull2D, IndependentOfInsertionOrder) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int n = 15;
  std::vector<double> z(n * n);
  for (auto& v : z) v = U(rng);
  EXPECT_EQ(lower_hull_2d(n, z, 1).is_vertex, lower_hull_2d(n, z, 2).is_vertex);
}

}  // namespace
}  // namespace rbk::exact
