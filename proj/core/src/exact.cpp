#include "rbk/exact/predicates.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rbk::exact {

namespace {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Adds b to a nonoverlapping expansion h (increasing magnitude), in place.
void grow_expansion(std::vector<double>& h, double b) {
  double q = b;
  for (double& hi : h) {
    double s, e;
    two_sum(q, hi, s, e);
    hi = e;
    q = s;
  }
  h.push_back(q);
}

}  // namespace

int sign_of_sum(std::span<const double> z, std::span<const std::int64_t> coeff) {
  double sum = 0.0, bound = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double t = z[i] * static_cast<double>(coeff[i]);
    sum += t;
    bound += std::abs(t);
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (std::abs(sum) > 8.0 * eps * bound) return sum > 0 ? 1 : -1;
  if (bound == 0.0) return 0;

  std::vector<double> h;
  h.reserve(4 * z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double p, e;
    two_product(z[i], static_cast<double>(coeff[i]), p, e);
    grow_expansion(h, e);
    grow_expansion(h, p);
  }
  for (std::size_t i = h.size(); i-- > 0;)
    if (h[i] != 0.0) return h[i] > 0 ? 1 : -1;
  return 0;
}

int orient2(const std::array<std::int64_t, 3>& x, const std::array<double, 3>& z) {
  const std::array<std::int64_t, 3> c{x[2] - x[1], x[0] - x[2], x[1] - x[0]};
  return sign_of_sum(z, c);
}

int orient3(const LiftedPoint& a, const LiftedPoint& b, const LiftedPoint& c, const LiftedPoint& d) {
  // Expansion along the z column of |b-a; c-a; d-a|.
  const std::int64_t bx = b.x - a.x, by = b.y - a.y;
  const std::int64_t cx = c.x - a.x, cy = c.y - a.y;
  const std::int64_t dx = d.x - a.x, dy = d.y - a.y;
  const std::int64_t jb = cx * dy - cy * dx;
  const std::int64_t jc = -(bx * dy - by * dx);
  const std::int64_t jd = bx * cy - by * cx;
  const std::array<double, 4> z{a.z, b.z, c.z, d.z};
  const std::array<std::int64_t, 4> j{-(jb + jc + jd), jb, jc, jd};
  return sign_of_sum(z, j);
}

int orient_xy(const LiftedPoint& a, const LiftedPoint& b, const LiftedPoint& c) {
  const std::int64_t v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

}  // namespace rbk::exact
