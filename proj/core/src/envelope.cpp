#include "rbk/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbk/bergman.hpp"
#include "rbk/error.hpp"
#include "rbk/exact/predicates.hpp"

namespace rbk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSlopeSlack = 1e-12;

double guarded_dot(const Point& xi, const Point& t) {
  double s = 0.0;
  for (int k = 0; k < 2; ++k)
    if (xi[k] != 0.0) s += xi[k] * t[k];
  return s;
}

struct Line {
  double slope;
  double intercept;
};

// Breakpoints (including s = 0 and s = 1) of the upper envelope of lines on [0, 1],
// each with the envelope value there.
std::vector<std::pair<double, double>> upper_envelope_breakpoints(std::vector<Line> lines) {
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.slope < b.slope || (a.slope == b.slope && a.intercept < b.intercept);
  });
  // Equal slopes: keep the largest intercept (last after sorting).
  std::vector<Line> uniq;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (i + 1 == lines.size() || lines[i + 1].slope != lines[i].slope) uniq.push_back(lines[i]);

  auto cross = [](const Line& a, const Line& b) { return (a.intercept - b.intercept) / (b.slope - a.slope); };
  std::vector<Line> st;
  for (const Line& l : uniq) {
    while (st.size() >= 2 && cross(st[st.size() - 2], l) <= cross(st[st.size() - 2], st.back())) st.pop_back();
    st.push_back(l);
  }
  auto value = [&](double s) {
    double best = kNegInf;
    for (const Line& l : st) best = std::max(best, l.slope * s + l.intercept);
    return best;
  };
  std::vector<std::pair<double, double>> out;
  out.emplace_back(0.0, value(0.0));
  for (std::size_t i = 0; i + 1 < st.size(); ++i) {
    const double s = cross(st[i], st[i + 1]);
    if (s > 0.0 && s < 1.0)
      out.emplace_back(s, std::max(st[i].slope * s + st[i].intercept, st[i + 1].slope * s + st[i + 1].intercept));
  }
  out.emplace_back(1.0, value(1.0));
  return out;
}

bool slope_in(const MomentPolytope& Q, const Point& g) {
  const double scale = std::max(1.0, std::abs(static_cast<double>(Q.a().numerator()) / Q.a().denominator()));
  return Q.contains(g, kSlopeSlack * scale);
}

void discrete_slopes(EnvelopeGrid& env) {
  const LogGrid& grid = env.grid;
  const int n = grid.n_per_axis;
  const double h = grid.spacing();
  env.slopes.assign(grid.size(), Point::Zero());
  auto diff = [&](int lo, int hi, double a, double b) { return (b - a) / ((hi - lo) * h); };
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.multi_index(k);
    const int i0 = std::max(i - 1, 0), i1 = std::min(i + 1, n - 1);
    env.slopes[k][0] = diff(i0, i1, env.values[grid.index(i0, j)], env.values[grid.index(i1, j)]);
    if (grid.dim == 2) {
      const int j0 = std::max(j - 1, 0), j1 = std::min(j + 1, n - 1);
      env.slopes[k][1] = diff(j0, j1, env.values[grid.index(i, j0)], env.values[grid.index(i, j1)]);
    }
  }
}

void envelope_1d(EnvelopeGrid& env) {
  const LogGrid& grid = env.grid;
  const std::vector<double>& u = env.samples;
  const double lo = 0.0, hi = env.polytope.volume();
  env.hull_1d = exact::lower_hull_1d(u);
  env.values.assign(u.size(), kNegInf);

  for (double xi : {lo, hi}) {
    double conj = kNegInf;
    for (std::size_t k = 0; k < u.size(); ++k) conj = std::max(conj, xi * grid.coordinate(static_cast<int>(k)) - u[k]);
    env.planes.push_back({Point(xi, 0.0), conj});
    for (std::size_t k = 0; k < u.size(); ++k)
      env.values[k] = std::max(env.values[k], xi * grid.coordinate(static_cast<int>(k)) - conj);
  }
  const auto& h = env.hull_1d;
  for (std::size_t s = 0; s + 1 < h.size(); ++s) {
    const int a = static_cast<int>(h[s]), b = static_cast<int>(h[s + 1]);
    const double ta = grid.coordinate(a), tb = grid.coordinate(b);
    const double slope = (u[b] - u[a]) / (tb - ta);
    if (!slope_in(env.polytope, Point(slope, 0.0))) continue;
    env.planes.push_back({Point(slope, 0.0), slope * ta - u[a]});
    for (int k = a; k <= b; ++k) env.values[k] = std::max(env.values[k], u[a] + slope * (grid.coordinate(k) - ta));
  }
}

void envelope_2d(EnvelopeGrid& env) {
  const LogGrid& grid = env.grid;
  const int n = grid.n_per_axis;
  const double h = grid.spacing();
  const std::vector<double>& u = env.samples;
  env.hull_2d = exact::lower_hull_2d(n, u);
  env.values.assign(u.size(), kNegInf);

  // Boundary of Q: breakpoints of u* along each edge.
  const std::vector<Point> poly = env.polytope.polygon();
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const Point v0 = poly[e], v1 = poly[(e + 1) % poly.size()];
    const Point dir = v1 - v0;
    std::vector<Line> lines(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const Point t = grid.point(k);
      lines[k] = {dir.dot(t), v0.dot(t) - u[k]};
    }
    for (const auto& [s, conj] : upper_envelope_breakpoints(std::move(lines))) {
      // Keep vertices of Q exact so that faces stay at zero coordinates.
      const Point xi = s == 0.0 ? v0 : (s == 1.0 ? v1 : Point(v0 + s * dir));
      env.planes.push_back({xi, conj});
    }
  }
  for (const SupportPlane& pl : env.planes)
    for (std::size_t k = 0; k < u.size(); ++k)
      env.values[k] = std::max(env.values[k], pl.gradient.dot(grid.point(k)) - pl.conjugate);

  // Interior dual vertices: lower facets whose gradient lies in Q.
  for (const auto& f : env.hull_2d.facets) {
    const auto A = grid.multi_index(f[0]), B = grid.multi_index(f[1]), C = grid.multi_index(f[2]);
    const double x1 = (B[0] - A[0]) * h, y1 = (B[1] - A[1]) * h;
    const double x2 = (C[0] - A[0]) * h, y2 = (C[1] - A[1]) * h;
    const double d1 = u[f[1]] - u[f[0]], d2 = u[f[2]] - u[f[0]];
    const double det = x1 * y2 - x2 * y1;
    const Point g((d1 * y2 - d2 * y1) / det, (x1 * d2 - x2 * d1) / det);
    if (!slope_in(env.polytope, g)) continue;
    const Point ta = grid.point(f[0]);
    env.planes.push_back({g, g.dot(ta) - u[f[0]]});

    const exact::LiftedPoint pa{A[0], A[1], 0}, pb{B[0], B[1], 0}, pc{C[0], C[1], 0};
    const int lo0 = std::min({A[0], B[0], C[0]}), hi0 = std::max({A[0], B[0], C[0]});
    const int lo1 = std::min({A[1], B[1], C[1]}), hi1 = std::max({A[1], B[1], C[1]});
    for (int i = lo0; i <= hi0; ++i)
      for (int j = lo1; j <= hi1; ++j) {
        const exact::LiftedPoint q{i, j, 0};
        if (exact::orient_xy(pa, pb, q) < 0 || exact::orient_xy(pb, pc, q) < 0 || exact::orient_xy(pc, pa, q) < 0)
          continue;
        const std::size_t k = grid.index(i, j);
        env.values[k] = std::max(env.values[k], u[f[0]] + g.dot(grid.point(k) - ta));
      }
  }
}

}  // namespace

double EnvelopeGrid::evaluate(const Point& t) const {
  double best = kNegInf;
  for (const SupportPlane& pl : planes) best = std::max(best, guarded_dot(pl.gradient, t) - pl.conjugate);
  return best;
}

EnvelopeGrid envelope_of(const std::vector<double>& samples, const LogGrid& grid, const MomentPolytope& polytope) {
  if (samples.size() != grid.size()) throw Error(ErrorCode::ValidationError, "sample count does not match grid");
  if (grid.dim != polytope.dim()) throw Error(ErrorCode::ValidationError, "grid and polytope dimensions differ");
  EnvelopeGrid env;
  env.grid = grid;
  env.polytope = polytope;
  env.p = polytope.dim();
  env.samples = samples;
  if (grid.dim == 1)
    envelope_1d(env);
  else
    envelope_2d(env);
  for (double v : env.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::HullDegenerate, "envelope has a non-finite value");
  discrete_slopes(env);
  return env;
}

EnvelopeGrid equilibrium_envelope(const Model& model, bool on_z) {
  const Space s = model.space(on_z);
  return envelope_of(on_z ? model.z_samples() : model.samples(), s.grid, s.polytope);
}

std::vector<double> pullback_to_z(const EnvelopeGrid& ambient, const Model& model) {
  const LogGrid& zg = model.z_grid();
  std::vector<double> out(zg.size());
  if (model.subvariety().kind == SubvarietyKind::Ambient) return ambient.values;
  for (std::size_t k = 0; k < zg.size(); ++k) out[k] = ambient.evaluate(model.subvariety().embed(zg.coordinate(static_cast<int>(k))));
  return out;
}

std::vector<bool> ContactSet::interior(const LogGrid& grid) const {
  std::vector<bool> out(mask.size(), false);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k] || !grid.is_interior(k)) continue;
    const auto [i, j] = grid.multi_index(k);
    bool ok = mask[grid.index(i - 1, j)] && mask[grid.index(i + 1, j)];
    if (grid.dim == 2) ok = ok && mask[grid.index(i, j - 1)] && mask[grid.index(i, j + 1)];
    out[k] = ok;
  }
  return out;
}

ContactSet contact_set(const EnvelopeGrid& env) {
  ContactSet cs;
  cs.mask.resize(env.values.size());
  cs.epsilon.resize(env.values.size());
  for (std::size_t k = 0; k < env.values.size(); ++k) {
    cs.epsilon[k] = 1e-10 * (1.0 + std::abs(env.samples[k]));
    cs.mask[k] = std::abs(env.values[k] - env.samples[k]) <= cs.epsilon[k];
    cs.count += cs.mask[k];
  }
  return cs;
}

RegularityProbe regularity_probe(const EnvelopeGrid& env) {
  RegularityProbe probe;
  probe.max_abs_second_difference = -1.0;
  for (std::size_t k = 0; k < env.grid.size(); ++k) {
    if (!env.grid.is_interior(k)) continue;
    const double v = discrete_hessian(env.grid, env.values, k).cwiseAbs().maxCoeff();
    if (v > probe.max_abs_second_difference) {
      probe.max_abs_second_difference = v;
      probe.index = k;
      probe.location = env.grid.point(k);
    }
  }
  return probe;
}

ConvergenceRow inner_sup_distance(const LogGrid& grid, const std::vector<double>& a, const std::vector<double>& b) {
  ConvergenceRow row;
  row.sup_distance = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!grid.in_inner_half(k)) continue;
    const double d = std::abs(a[k] - b[k]);
    if (!(d <= row.sup_distance)) {
      row.sup_distance = d;
      row.location = grid.point(k);
    }
  }
  return row;
}

std::vector<ConvergenceRow> bergman_iteration_limit(const Model& model, const EnvelopeGrid& env,
                                                    const std::vector<int>& m_list) {
  std::vector<ConvergenceRow> rows;
  for (int m : m_list) {
    const RestrictionMap rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
    const FsPotential um = fs_potential(model, rmap, m, env.grid);
    ConvergenceRow row = inner_sup_distance(env.grid, um.values, env.values);
    row.m = m;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rbk
