#pragma once

// Exact orientation tests for lifted grid points (integer x, y; double z).
//
// Both determinants are linear in the heights with small integer
// coefficients, so the sign of sum_p z_p J_p is decided by a floating-point
// filter and, when that is inconclusive, by an exact expansion sum.

#include <array>
#include <cstdint>
#include <span>

namespace rbk::exact {

/// Exact sign of sum_i z[i] * coeff[i]. Coefficients must be below 2^53 in magnitude.
int sign_of_sum(std::span<const double> z, std::span<const std::int64_t> coeff);

/// Sign of det |x_a z_a 1; x_b z_b 1; x_c z_c 1|: positive when c lies to the
/// left of the directed line a -> b in the (x, z) plane.
int orient2(const std::array<std::int64_t, 3>& x, const std::array<double, 3>& z);

struct LiftedPoint {
  std::int64_t x;
  std::int64_t y;
  double z;
};

/// Sign of (d - a) . ((b - a) x (c - a)): positive when d lies on the side the
/// normal of the counter-clockwise triangle (a, b, c) points to.
int orient3(const LiftedPoint& a, const LiftedPoint& b, const LiftedPoint& c, const LiftedPoint& d);

/// Sign of the z component of (b - a) x (c - a), i.e. the xy orientation.
int orient_xy(const LiftedPoint& a, const LiftedPoint& b, const LiftedPoint& c);

}  // namespace rbk::exact
