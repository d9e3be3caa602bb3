#include "rbk/volume.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

namespace {

// Lagrange interpolation through the first p + 1 counts, in exact arithmetic.
std::optional<Rational> exact_leading(const std::vector<DimensionRow>& dims, int p) {
  const int k = p + 1;
  auto eval = [&](std::int64_t m) {
    Rational s(0);
    for (int i = 0; i < k; ++i) {
      Rational term(static_cast<std::int64_t>(dims[i].image_dim));
      for (int j = 0; j < k; ++j)
        if (j != i) term *= Rational(m - dims[j].m, dims[i].m - dims[j].m);
      s += term;
    }
    return s;
  };
  for (const DimensionRow& row : dims)
    if (eval(row.m) != Rational(static_cast<std::int64_t>(row.image_dim))) return std::nullopt;
  Rational lead(0);
  for (int i = 0; i < k; ++i) {
    Rational term(static_cast<std::int64_t>(dims[i].image_dim));
    for (int j = 0; j < k; ++j)
      if (j != i) term /= Rational(dims[i].m - dims[j].m);
    lead += term;
  }
  return p == 1 ? lead : lead * 2;
}

}  // namespace

VolumeFit volume_from_dims(const std::vector<DimensionRow>& dims, int p) {
  if (dims.size() < 3) throw Error(ErrorCode::InsufficientSweep, fmt::format("{} values of m, need at least 3", dims.size()));
  int top = 0;
  for (const auto& r : dims) top = std::max(top, r.m);
  if (top < 32) throw Error(ErrorCode::InsufficientSweep, fmt::format("largest m is {}, need at least 32", top));

  const auto rows = static_cast<Eigen::Index>(dims.size());
  Eigen::MatrixXd A(rows, p + 1);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    // Columns scaled by top^j keep the least-squares problem well conditioned.
    const double x = static_cast<double>(dims[i].m) / top;
    for (int j = 0; j <= p; ++j) A(i, j) = std::pow(x, j);
    b[i] = static_cast<double>(dims[i].image_dim);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  VolumeFit fit;
  fit.value = c[p] / std::pow(static_cast<double>(top), p) * (p == 1 ? 1.0 : 2.0);
  fit.exact = exact_leading(dims, p);
  if (fit.exact) fit.value = static_cast<double>(fit.exact->numerator()) / static_cast<double>(fit.exact->denominator());
  return fit;
}

double moving_intersection(const Model& model, const FsPotential& um) {
  if (!um.masked.empty())
    throw Error(ErrorCode::LogOfZero, fmt::format("u_m has {} masked points at m={}", um.masked.size(), um.m));
  const Space z = model.space(true);
  return monge_ampere(envelope_of(um.values, um.grid, z.polytope)).total;
}

double moving_intersection(const Model& model, const RestrictionMap& rmap, int m) {
  return moving_intersection(model, fs_potential(model, rmap, m, model.z_grid()));
}

KernelGrid kernel_for(const Model& model, int m) {
  const RestrictionMap rmap = restriction_map(section_basis(model.polytope(), m), model.subvariety());
  const OrthonormalTransform onb = orthonormalize(gram(model, rmap, m));
  return kernel_eval(model, rmap, onb, m, model.z_grid());
}

FundamentalProbe fundamental_inequality_probe(const Model& model, const EnvelopeGrid& env,
                                              const std::vector<KernelGrid>& kernels) {
  const std::vector<double>& u = model.z_samples();
  const int p = model.p();
  FundamentalProbe probe;
  double log_c = 0.0;
  for (const KernelGrid& k : kernels) {
    if (k.grid.size() != env.grid.size()) throw Error(ErrorCode::ValidationError, "kernel and envelope grids differ");
    const double log_mp = p * std::log(static_cast<double>(k.m));
    for (std::size_t i = 0; i < k.grid.size(); ++i) {
      if (!k.grid.in_inner_half(i)) continue;
      // r = log B + m (u - Pu); need C >= e^{-r} and C >= e^{r} / m^p
      const double r = k.log_values[i] + k.m * (u[i] - env.values[i]);
      const double need = std::max(-r, r - log_mp);
      if (need > log_c) {
        log_c = need;
        probe.argmax_m = k.m;
        probe.argmax_location = k.grid.point(i);
      }
    }
  }
  probe.fitted_c = std::exp(log_c);
  if (!(probe.fitted_c <= 1e12))
    throw Error(ErrorCode::Unbounded, fmt::format("fitted constant {:.3e} exceeds 1e12 at m={}", probe.fitted_c, probe.argmax_m));
  return probe;
}

FundamentalProbe fundamental_inequality_probe(const Model& model, const EnvelopeGrid& env,
                                              const std::vector<int>& m_list) {
  std::vector<KernelGrid> kernels;
  for (int m : m_list) kernels.push_back(kernel_for(model, m));
  return fundamental_inequality_probe(model, env, kernels);
}

double restricted_ma_volume(const Model& model) { return monge_ampere(equilibrium_envelope(model, true)).total; }

double ambient_pullback_volume(const Model& model) {
  const EnvelopeGrid ambient = equilibrium_envelope(model, false);
  if (model.subvariety().kind == SubvarietyKind::Ambient) return monge_ampere(ambient).total;
  const Space z = model.space(true);
  return monge_ampere(envelope_of(pullback_to_z(ambient, model), z.grid, z.polytope)).total;
}

InvarianceResult invariance_check(const Model& a, const Model& b) {
  if (!(a.polytope() == b.polytope()) || a.subvariety().kind != b.subvariety().kind)
    throw Error(ErrorCode::ValidationError, "invariance check needs the same polytope and subvariety");
  InvarianceResult r;
  r.vol_a = restricted_ma_volume(a);
  r.vol_b = restricted_ma_volume(b);
  r.gap = relative_gap(r.vol_a, r.vol_b);
  return r;
}

VolumeReport assemble_report(const std::string& id, const Model& model, const std::vector<int>& m_list,
                             std::vector<KernelGrid>* kernels) {
  VolumeReport rep;
  rep.scenario_id = id;
  rep.p = model.p();
  rep.dims = dimension_sweep(model.polytope(), model.subvariety(), m_list);
  rep.vol_from_dims = volume_from_dims(rep.dims, rep.p);

  const EnvelopeGrid env = equilibrium_envelope(model, true);
  rep.vol_from_ma_restricted = monge_ampere(env).total;
  rep.vol_from_ma_ambient_pullback = ambient_pullback_volume(model);

  std::vector<KernelGrid> probe_kernels;
  for (int m : m_list) {
    KernelGrid k = kernel_for(model, m);
    rep.moving.push_back({m, moving_intersection(model, fs_potential(model, k))});
    if (m >= 8) probe_kernels.push_back(k);
    if (kernels) kernels->push_back(std::move(k));
  }
  if (!probe_kernels.empty()) rep.fundamental = fundamental_inequality_probe(model, env, probe_kernels);

  rep.gap_dims_restricted = relative_gap(rep.vol_from_dims.value, rep.vol_from_ma_restricted);
  rep.gap_dims_ambient = relative_gap(rep.vol_from_dims.value, rep.vol_from_ma_ambient_pullback);
  rep.gap_restricted_ambient = relative_gap(rep.vol_from_ma_restricted, rep.vol_from_ma_ambient_pullback);
  rep.three_way_agreement = rep.gap_dims_restricted < 1e-6 && rep.gap_dims_ambient < 1e-6 && rep.gap_restricted_ambient < 1e-6;
  return rep;
}

}  // namespace rbk
