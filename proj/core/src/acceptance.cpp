#include "rbk/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "rbk/bergman.hpp"
#include "rbk/envelope.hpp"
#include "rbk/error.hpp"
#include "rbk/ma.hpp"
#include "rbk/scenario.hpp"
#include "rbk/sections.hpp"
#include "rbk/volume.hpp"

namespace rbk {

namespace {

namespace fs = std::filesystem;

const std::vector<int> kDyadic{1, 2, 4, 8, 16, 32, 64};
const std::vector<int> kProbe{8, 16, 32, 64};
constexpr const char* kBump = "p1_bump";

std::vector<Scenario> all_scenarios(const fs::path& dir) {
  std::vector<Scenario> out;
  for (const auto& f : scenario_files(dir)) out.push_back(load_scenario(f));
  if (out.empty()) throw Error(ErrorCode::Io, "no scenarios found in " + dir.string());
  return out;
}

RestrictionMap rmap_for(const Model& model, int m) {
  return restriction_map(section_basis(model.polytope(), m), model.subvariety());
}

Model with_n(const Model& model, int n) {
  return model.with_grid(LogGrid::make(model.grid().dim, n, model.grid().halfwidth));
}

double min_hessian_eigenvalue(const WeightSymbol& w, const LogGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Hessian H = w.hessian(grid.point(k));
    if (grid.dim == 1) {
      lo = std::min(lo, H(0, 0));
    } else {
      const double tr = H.trace(), det = H.determinant();
      lo = std::min(lo, 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det)));
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------

void trace_identity(CriterionResult& r, const fs::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const Scenario& s : all_scenarios(dir)) {
    const Model model = s.model();
    for (int m : kDyadic) {
      const RestrictionMap rmap = rmap_for(model, m);
      const OrthonormalTransform onb = orthonormalize(gram(model, rmap, m));
      const double dims = static_cast<double>(rmap.image_dims());
      const double err = std::abs(kernel_trace(model, rmap, onb, m) - dims) / dims;
      if (err >= worst) {
        worst = err;
        where = fmt::format("{} m={}", s.id, m);
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = worst < 1e-8 && secs < 60.0;
  r.detail = fmt::format("max relative error {:.3e} at {} (limit 1e-8), {:.1f} s (limit 60 s)", worst, where, secs);
}

void constant_kernel(CriterionResult& r, const fs::path& dir) {
  const Model model = load_shipped(dir, "p1_fs").model();
  double worst = 0.0;
  int at = 0;
  for (int m = 1; m <= 64; ++m) {
    const KernelGrid k = kernel_for(model, m);
    for (double b : k.values)
      if (std::abs(b - (m + 1)) >= worst) {
        worst = std::abs(b - (m + 1));
        at = m;
      }
  }
  r.pass = worst < 1e-6;
  r.detail = fmt::format("sup |B - (m+1)| = {:.3e} at m={} over m=1..64 (limit 1e-6)", worst, at);
}

void main_convergence(CriterionResult& r, const fs::path& dir) {
  const Model model = load_shipped(dir, kBump).model();
  const EnvelopeGrid env = equilibrium_envelope(model, true);
  const DiscreteMeasure ma = monge_ampere(env);
  const DiscreteMeasure dmu = reference_cells(model.restricted_symbol(), model.z_grid());
  const auto tests = shipped_test_functions(model.z_grid());
  const auto g8 = weak_compare(kernel_for(model, 8), dmu, ma, tests, model.p());
  const auto g64 = weak_compare(kernel_for(model, 64), dmu, ma, tests, model.p());
  bool ok = true;
  std::string parts;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    ok = ok && g64[i] < g8[i] && g64[i] < 0.05 * ma.total;
    parts += fmt::format("{}{}: {:.2e}->{:.2e}", i ? ", " : "", tests[i].name, g8[i], g64[i]);
  }
  r.pass = ok;
  r.detail = fmt::format("gap(8)->gap(64) [{}], limit 0.05*total={:.3g}", parts, 0.05 * ma.total);
}

void fundamental_inequality(CriterionResult& r, const fs::path& dir) {
  bool ok = true;
  std::string parts;
  for (const Scenario& s : all_scenarios(dir)) {
    const Model model = s.model();
    const EnvelopeGrid env = equilibrium_envelope(model, true);
    std::vector<KernelGrid> kernels;
    for (int m : kProbe) kernels.push_back(kernel_for(model, m));
    const double c4 = fundamental_inequality_probe(model, env, kernels).fitted_c;
    kernels.pop_back();
    const double c3 = fundamental_inequality_probe(model, env, kernels).fitted_c;
    const double change = std::abs(c4 - c3) / c3;
    ok = ok && c4 <= 1e6 && change < 0.1;
    parts += fmt::format("{}{}: C={:.4g} change={:.2e}", parts.empty() ? "" : "; ", s.id, c4, change);
  }
  r.pass = ok;
  r.detail = parts + " (limits C<=1e6, change<0.1)";
}

void triple_identity(CriterionResult& r, const fs::path& dir) {
  const std::vector<std::pair<std::string, double>> cases{
      {"diag_fs", 2.0}, {"diag_bump", 2.0}, {"line_p2", 1.0}, {"p1_fs", 1.0}, {"p2_fs", 1.0}};
  bool ok = true;
  std::string parts;
  for (const auto& [id, expected] : cases) {
    const Model model = load_shipped(dir, id).model();
    const VolumeFit dims = volume_from_dims(dimension_sweep(model.polytope(), model.subvariety(), kDyadic), model.p());
    const double vr = restricted_ma_volume(model);
    const double va = ambient_pullback_volume(model);
    const bool exact = dims.exact && *dims.exact == Rational(static_cast<std::int64_t>(expected));
    ok = ok && exact && std::abs(vr - expected) <= 1e-6 && std::abs(va - expected) <= 1e-6;
    parts += fmt::format("{}{}: dims={}{} restricted={:.12g} pullback={:.12g}", parts.empty() ? "" : "; ", id,
                         dims.value, exact ? " exact" : "", vr, va);
  }
  r.pass = ok;
  r.detail = parts;
}

void representation_formula(CriterionResult& r, const fs::path& dir) {
  const Model model = with_n(load_shipped(dir, kBump).model(), 257);
  const Model fine = with_n(model, 513);
  const EnvelopeGrid env = equilibrium_envelope(model, true);
  const double total = monge_ampere(env).total;
  const RepresentationResidual coarse = representation_residual(env, model.restricted_symbol());
  const RepresentationResidual refined =
      representation_residual(equilibrium_envelope(fine, true), fine.restricted_symbol());
  const double ratio = refined.cellwise_gap / coarse.cellwise_gap;
  r.pass = coarse.mass_off_contact < 1e-8 * total && ratio <= 0.6;
  r.detail = fmt::format("mass off contact {:.3e} (limit {:.3e}); cellwise gap {:.3e} -> {:.3e}, ratio {:.3f} (limit 0.6)",
                         coarse.mass_off_contact, 1e-8 * total, coarse.cellwise_gap, refined.cellwise_gap, ratio);
}

void envelope_convergence(CriterionResult& r, const fs::path& dir) {
  const Model model = load_shipped(dir, kBump).model();
  const EnvelopeGrid env = equilibrium_envelope(model, true);
  const auto rows = bergman_iteration_limit(model, env, kProbe);
  const double c = fundamental_inequality_probe(model, env, kProbe).fitted_c;
  bool decreasing = true;
  std::string parts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) decreasing = decreasing && rows[i].sup_distance < rows[i - 1].sup_distance;
    parts += fmt::format("{}m={}: {:.4e}", i ? ", " : "", rows[i].m, rows[i].sup_distance);
  }
  const double bound = (std::log(c) + std::log(64.0)) / 64.0;
  // C is fitted on the same points, so the bound can be attained exactly; allow rounding.
  r.pass = decreasing && rows.back().sup_distance <= bound * (1.0 + 1e-12);
  r.detail = fmt::format("{}; strictly decreasing={}; bound (log C + log 64)/64 = {:.4e} with C={:.4g}", parts,
                         decreasing, bound, c);
}

void regularity(CriterionResult& r, const fs::path& dir) {
  const Model base = load_shipped(dir, kBump).model();
  std::vector<double> v;
  for (int n : {257, 513, 1025}) v.push_back(regularity_probe(equilibrium_envelope(with_n(base, n), true)).max_abs_second_difference);
  const double ratio = v[2] / v[0];
  r.pass = ratio <= 1.5;
  r.detail = fmt::format("max second difference {:.6g}, {:.6g}, {:.6g} at n=257,513,1025; ratio {:.4f} (limit 1.5)", v[0],
                         v[1], v[2], ratio);
}

void extension_bound(CriterionResult& r, const fs::path& dir) {
  const Model model = load_shipped(dir, "diag_fs").model();
  std::vector<double> norms;
  std::string parts;
  for (int m : {4, 8, 16, 32, 64}) {
    norms.push_back(extension_report(model, rmap_for(model, m), m).operator_norm);
    parts += fmt::format("{}m={}: {:.5g}", parts.empty() ? "" : ", ", m, norms.back());
  }
  const double hi = *std::max_element(norms.begin(), norms.end());
  const double lo = *std::min_element(norms.begin(), norms.end());
  const double prev = *std::max_element(norms.begin(), norms.end() - 1);
  const bool spread = hi / lo < 10.0;
  const bool trend = norms.back() <= 1.2 * prev;
  r.pass = spread && trend;
  r.detail = fmt::format("{}; max/min={:.3f} (limit 10), last/max(previous)={:.3f} (limit 1.2)", parts, hi / lo,
                         norms.back() / prev);
}

void invariance(CriterionResult& r, const fs::path& dir) {
  struct Pair {
    std::string id;
    Perturbation g;
    std::string label;
  };
  const std::vector<Pair> pairs{
      {"diag_fs", Perturbation({GaussianBump{0.05, Point::Zero(), 1.0}}), "0.05 bump"},
      {"p1_fs", Perturbation({TanhTilt{0.1, Point(0.5, 0.0)}}), "0.1 tanh(t/2)"},
  };
  bool ok = true;
  std::string parts;
  for (const Pair& p : pairs) {
    const Model a = load_shipped(dir, p.id).model();
    const Model b = a.with_perturbation(p.g);
    const double ea = min_hessian_eigenvalue(a.weight(), a.grid());
    const double eb = min_hessian_eigenvalue(b.weight(), b.grid());
    const InvarianceResult inv = invariance_check(a, b);
    ok = ok && ea >= 0 && eb >= 0 && inv.gap < 1e-6;
    parts += fmt::format("{}{} vs {}: {:.15g} / {:.15g}, gap {:.2e}, min curvature {:.2e} / {:.2e}",
                         parts.empty() ? "" : "; ", p.id, p.label, inv.vol_a, inv.vol_b, inv.gap, ea, eb);
  }
  r.pass = ok;
  r.detail = parts;
}

void moving_intersection_check(CriterionResult& r, const fs::path& dir) {
  bool ok = true;
  std::string parts;
  for (const Scenario& s : all_scenarios(dir)) {
    const Model model = s.model();
    const double vol = volume_from_dims(dimension_sweep(model.polytope(), model.subvariety(), kDyadic), model.p()).value;
    double prev = std::numeric_limits<double>::infinity();
    bool mono = true;
    double last = 0.0;
    for (int m : kDyadic) {
      const double gap = std::abs(moving_intersection(model, fs_potential(model, kernel_for(model, m))) - vol);
      // Non-increasing up to a rounding floor of 1e-12.
      mono = mono && gap <= prev + 1e-12;
      prev = gap;
      last = gap;
    }
    ok = ok && mono && last < 1e-3;
    parts += fmt::format("{}{}: gap(64)={:.2e}{}", parts.empty() ? "" : "; ", s.id, last, mono ? "" : " NOT monotone");
  }
  r.pass = ok;
  r.detail = parts;
}

void mass_conservation(CriterionResult& r, const fs::path& dir) {
  double worst = 0.0;
  std::string where;
  std::size_t count = 0;
  auto check = [&](const DiscreteMeasure& mu, double expected, const std::string& label) {
    const double e = relative_gap(mu.total, expected);
    ++count;
    if (e >= worst) {
      worst = e;
      where = label;
    }
  };
  for (const Scenario& s : all_scenarios(dir)) {
    const Model model = s.model();
    const Space z = model.space(true);
    const EnvelopeGrid restricted = equilibrium_envelope(model, true);
    check(monge_ampere(restricted), z.polytope.normalized_volume(), s.id + " restricted");
    if (model.subvariety().kind != SubvarietyKind::Ambient) {
      const EnvelopeGrid ambient = equilibrium_envelope(model, false);
      check(monge_ampere(ambient), model.polytope().normalized_volume(), s.id + " ambient");
      check(monge_ampere(envelope_of(pullback_to_z(ambient, model), z.grid, z.polytope)), z.polytope.normalized_volume(),
            s.id + " pullback");
    }
  }
  r.pass = worst < 1e-6;
  r.detail = fmt::format("{} envelopes, worst relative mass error {:.3e} at {} (limit 1e-6)", count, worst, where);
}

}  // namespace

CriterionResult run_criterion(int id, const fs::path& dir) {
  static const char* names[kCriterionCount] = {
      "trace identity",          "constant-kernel oracle",  "main convergence",
      "fundamental inequality",  "restricted-volume triple identity", "representation formula",
      "envelope convergence",    "regularity proxy",        "extension-operator boundedness",
      "numerical invariance",    "moving intersection",     "mass conservation"};
  CriterionResult r;
  r.id = id;
  if (id < 1 || id > kCriterionCount) {
    r.name = "unknown";
    r.detail = fmt::format("no criterion {}", id);
    return r;
  }
  r.name = names[id - 1];
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: trace_identity(r, dir); break;
      case 2: constant_kernel(r, dir); break;
      case 3: main_convergence(r, dir); break;
      case 4: fundamental_inequality(r, dir); break;
      case 5: triple_identity(r, dir); break;
      case 6: representation_formula(r, dir); break;
      case 7: envelope_convergence(r, dir); break;
      case 8: regularity(r, dir); break;
      case 9: extension_bound(r, dir); break;
      case 10: invariance(r, dir); break;
      case 11: moving_intersection_check(r, dir); break;
      case 12: mass_conservation(r, dir); break;
    }
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("{} [{:2d}] {}: {} ({:.2f} s)", r.pass ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

}  // namespace rbk
