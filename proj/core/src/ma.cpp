#include "rbk/ma.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

namespace {

using Polygon = std::vector<Point>;

// Keeps {xi : <n, xi> >= c}.
Polygon clip(const Polygon& poly, const Point& n, double c) {
  Polygon out;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % k];
    const double fa = n.dot(a) - c, fb = n.dot(b) - c;
    if (fa >= 0) out.push_back(a);
    if ((fa >= 0) != (fb >= 0)) {
      const double s = fa / (fa - fb);
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

double area(const Polygon& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * std::abs(s);
}

DiscreteMeasure finish(const LogGrid& grid, std::vector<double> masses) {
  DiscreteMeasure mu;
  mu.grid = grid;
  mu.masses = std::move(masses);
  mu.total = 0.0;
  for (double v : mu.masses) mu.total += v;
  return mu;
}

}  // namespace

DiscreteMeasure monge_ampere_1d(const EnvelopeGrid& env) {
  if (env.grid.dim != 1) throw Error(ErrorCode::ValidationError, "monge_ampere_1d needs a one-dimensional envelope");
  const LogGrid& g = env.grid;
  const double lo = 0.0, hi = env.polytope.volume();
  const auto& h = env.hull_1d;
  const std::vector<double>& u = env.samples;
  std::vector<double> masses(g.size(), 0.0);
  // Vertex k owns the slopes between its two hull edges, clipped to [lo, hi].
  auto edge_slope = [&](std::size_t s) {
    return (u[h[s + 1]] - u[h[s]]) / (g.coordinate(static_cast<int>(h[s + 1])) - g.coordinate(static_cast<int>(h[s])));
  };
  for (std::size_t s = 0; s < h.size(); ++s) {
    const double left = s == 0 ? lo : std::clamp(edge_slope(s - 1), lo, hi);
    const double right = s + 1 == h.size() ? hi : std::clamp(edge_slope(s), lo, hi);
    masses[h[s]] = std::max(0.0, right - left);
  }
  return finish(g, std::move(masses));
}

DiscreteMeasure monge_ampere_2d(const EnvelopeGrid& env) {
  if (env.grid.dim != 2) throw Error(ErrorCode::ValidationError, "monge_ampere_2d needs a two-dimensional envelope");
  const LogGrid& g = env.grid;
  const auto& hull = env.hull_2d;
  const std::vector<double>& u = env.samples;
  const Polygon base = env.polytope.polygon();
  std::vector<double> masses(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!hull.is_vertex[i]) continue;
    const Point ti = g.point(i);
    Polygon cell = base;
    // Dual cell: slopes xi at which vertex i maximizes <xi, t_k> - u_k.
    for (std::size_t j : hull.neighbours[i]) {
      cell = clip(cell, ti - g.point(j), u[i] - u[j]);
      if (cell.size() < 3) break;
    }
    if (cell.size() >= 3) masses[i] = 2.0 * area(cell);
  }
  return finish(g, std::move(masses));
}

DiscreteMeasure monge_ampere(const EnvelopeGrid& env) {
  return env.grid.dim == 1 ? monge_ampere_1d(env) : monge_ampere_2d(env);
}

DiscreteMeasure smooth_ma(const WeightSymbol& symbol, const LogGrid& grid, SmoothMaMode mode) {
  const double h = grid.spacing();
  const double floor = -10.0 * h * h;
  std::vector<double> samples;
  CurvatureField field;
  if (mode == SmoothMaMode::Discrete) field = curvature_field(symbol, grid);
  std::vector<double> masses(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Hessian H = mode == SmoothMaMode::Analytic ? symbol.hessian(grid.point(k)) : field.hessians[k];
    if (grid.dim == 1) {
      if (H(0, 0) >= floor) masses[k] = std::max(H(0, 0), 0.0) * h;
      continue;
    }
    const double tr = H.trace(), det = H.determinant();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lmin = 0.5 * tr - disc;
    if (lmin >= floor) masses[k] = 2.0 * std::max(det, 0.0) * h * h;
  }
  return finish(grid, std::move(masses));
}

DiscreteMeasure smooth_ma(const Model& model, bool on_z, SmoothMaMode mode) {
  const Space s = model.space(on_z);
  return smooth_ma(s.symbol, s.grid, mode);
}

RepresentationResidual representation_residual(const EnvelopeGrid& env, const WeightSymbol& symbol,
                                               SmoothMaMode mode) {
  const DiscreteMeasure ma = monge_ampere(env);
  const DiscreteMeasure smooth = smooth_ma(symbol, env.grid, mode);
  const ContactSet cs = contact_set(env);
  const std::vector<bool> inner = cs.interior(env.grid);
  RepresentationResidual r;
  for (std::size_t k = 0; k < env.grid.size(); ++k) {
    if (!cs.mask[k]) r.mass_off_contact += ma.masses[k];
    if (inner[k]) {
      r.cellwise_gap = std::max(r.cellwise_gap, std::abs(ma.masses[k] - smooth.masses[k]));
      ++r.contact_interior;
    }
  }
  return r;
}

DiscreteMeasure reference_cells(const WeightSymbol& symbol, const LogGrid& grid) {
  std::vector<double> masses(grid.size(), 0.0);
  const double h = grid.spacing();
  if (grid.dim == 1) {
    const double top = symbol.reference.gradient_polytope().volume();
    const int n = grid.n_per_axis;
    for (int i = 0; i < n; ++i) {
      const double t = grid.coordinate(i);
      const double lo = i == 0 ? 0.0 : symbol.reference.gradient(Point(t - 0.5 * h, 0.0))[0];
      const double hi = i == n - 1 ? top : symbol.reference.gradient(Point(t + 0.5 * h, 0.0))[0];
      masses[i] = hi - lo;
    }
  } else {
    for (std::size_t k = 0; k < grid.size(); ++k) masses[k] = symbol.reference_density(grid.point(k)) * h * h;
  }
  return finish(grid, std::move(masses));
}

std::vector<TestFunction> shipped_test_functions(const LogGrid& grid) {
  std::vector<TestFunction> out;
  out.push_back({[](const Point&) { return 1.0; }, "one"});
  const double T = grid.halfwidth;
  const double width = T / 20.0;
  const int dim = grid.dim;
  for (double c : {-T / 4.0, -T / 8.0, 0.0, T / 8.0, T / 4.0}) {
    const Point center = dim == 1 ? Point(c, 0.0) : Point(c, c);
    out.push_back({[center, width](const Point& t) { return std::exp(-(t - center).squaredNorm() / (width * width)); },
                   fmt::format("bump({:g})", c)});
  }
  return out;
}

double pairing(const DiscreteMeasure& mu, const TestFunction& chi) {
  double s = 0.0;
  for (std::size_t k = 0; k < mu.grid.size(); ++k) s += chi.f(mu.grid.point(k)) * mu.masses[k];
  return s;
}

std::vector<double> weak_compare(const KernelGrid& kernel, const DiscreteMeasure& dmu, const DiscreteMeasure& target,
                                 const std::vector<TestFunction>& tests, int p) {
  if (kernel.grid.size() != target.grid.size() || dmu.grid.size() != target.grid.size())
    throw Error(ErrorCode::ValidationError, "kernel and target live on different grids");
  const double scale = (p == 1 ? 1.0 : 2.0) / std::pow(static_cast<double>(kernel.m), p);
  std::vector<double> gaps;
  for (const TestFunction& chi : tests) {
    double a = 0.0;
    for (std::size_t k = 0; k < kernel.grid.size(); ++k)
      a += chi.f(kernel.grid.point(k)) * scale * kernel.values[k] * dmu.masses[k];
    gaps.push_back(std::abs(a - pairing(target, chi)));
  }
  return gaps;
}

bool mass_comparison_check(const DiscreteMeasure& less_singular, const DiscreteMeasure& more_singular) {
  const double tol = 1e-10 * std::max(1.0, less_singular.total);
  return more_singular.total <= less_singular.total + tol &&
         std::abs(more_singular.total - less_singular.total) <= tol;
}

}  // namespace rbk
