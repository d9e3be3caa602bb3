#include "rbk/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

namespace {

constexpr double kPivotRatioLimit = 1e14;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot(const Exponent& k, const Point& t) {
  // Zero exponents contribute nothing even at infinite coordinates.
  double s = 0.0;
  if (k[0] != 0) s += static_cast<double>(k[0]) * t[0];
  if (k[1] != 0) s += static_cast<double>(k[1]) * t[1];
  return s;
}

double log_sum_exp(const std::vector<double>& xs) {
  double top = kNegInf;
  for (double x : xs) top = std::max(top, x);
  if (top == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - top);
  return top + std::log(sum);
}

}  // namespace

double GramMatrix::log_diagonal(std::size_t k) const {
  const auto i = static_cast<Eigen::Index>(k);
  const double d = diagonal ? scaled_diagonal[i] : scaled(i, i);
  return shifts[i] + std::log(d);
}

Eigen::MatrixXd GramMatrix::dense_scaled() const {
  if (diagonal) return scaled_diagonal.asDiagonal();
  return scaled;
}

Eigen::MatrixXd GramMatrix::dense() const {
  const Eigen::VectorXd d = (0.5 * shifts.array()).exp().matrix();
  return d.asDiagonal() * dense_scaled() * d.asDiagonal();
}

GramMatrix GramMatrix::from_matrix(const Eigen::MatrixXd& g) {
  GramMatrix out;
  out.shifts = Eigen::VectorXd::Zero(g.rows());
  out.diagonal = false;
  out.scaled = g;
  out.rule_tag = "explicit";
  return out;
}

GramMatrix gram_of(const WeightSymbol& symbol, const std::vector<Exponent>& exponents, int m,
                   const QuadratureOptions& options) {
  const QuadratureRule rule = reference_rule(symbol.reference, options);
  const std::size_t nq = rule.size();
  std::vector<double> mu(nq);
  for (std::size_t q = 0; q < nq; ++q) mu[q] = m * symbol.value(rule.nodes[q]);

  GramMatrix g;
  g.m = m;
  g.exponents = exponents;
  g.diagonal = true;
  g.rule_tag = rule.tag;
  g.nodes = nq;
  const auto n = static_cast<Eigen::Index>(exponents.size());
  g.shifts.resize(n);
  g.scaled_diagonal.resize(n);

  // Distinct monomials are orthogonal for torus-invariant weights: only the
  // diagonal is integrated.
  std::vector<double> logs(nq);
  for (Eigen::Index k = 0; k < n; ++k) {
    double top = kNegInf;
    for (std::size_t q = 0; q < nq; ++q) {
      logs[q] = dot(exponents[k], rule.nodes[q]) - mu[q];
      top = std::max(top, logs[q]);
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < nq; ++q) sum += rule.weights[q] * std::exp(logs[q] - top);
    if (!std::isfinite(top) || !(sum > 1e-300))
      throw Error(ErrorCode::QuadratureUnderflow,
                  fmt::format("Gram entry {} at m={} underflows after rescaling", k, m));
    g.shifts[k] = top;
    g.scaled_diagonal[k] = sum;
  }
  return g;
}

GramMatrix gram(const Model& model, const RestrictionMap& rmap, int m, const QuadratureOptions& options) {
  if (rmap.source.m != m)
    throw Error(ErrorCode::ValidationError, fmt::format("restriction map is for m={}, not {}", rmap.source.m, m));
  GramMatrix g = gram_of(model.restricted_symbol(), rmap.target_exponents, m, options);
  for (Eigen::Index k = 0; k < g.scaled_diagonal.size(); ++k)
    if (!(g.scaled_diagonal[k] > 0))
      throw Error(ErrorCode::NotPositiveDefinite, fmt::format("diagonal entry {} is not positive", k));
  return g;
}

GramMatrix ambient_gram(const Model& model, const RestrictionMap& rmap, const QuadratureOptions& options) {
  return gram_of(model.weight(), rmap.source.exponents, rmap.source.m, options);
}

OrthonormalTransform orthonormalize(const GramMatrix& g) {
  OrthonormalTransform onb;
  onb.shifts = g.shifts;
  onb.diagonal = g.diagonal;
  if (g.diagonal) {
    const Eigen::VectorXd& d = g.scaled_diagonal;
    if ((d.array() <= 0).any() || !d.allFinite())
      throw Error(ErrorCode::NotPositiveDefinite, "Gram diagonal has a nonpositive entry");
    onb.inv_sqrt = d.array().rsqrt().matrix();
    onb.pivot_ratio = d.maxCoeff() / d.minCoeff();
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(g.scaled);
    if (llt.info() != Eigen::Success) {
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.scaled, Eigen::EigenvaluesOnly).eigenvalues();
      throw Error(ErrorCode::NotPositiveDefinite,
                  fmt::format("Cholesky failed; eigenvalues in [{:.3e}, {:.3e}]", ev.minCoeff(), ev.maxCoeff()));
    }
    onb.lower = llt.matrixL();
    const Eigen::VectorXd piv = onb.lower.diagonal().array().square().matrix();
    onb.pivot_ratio = piv.maxCoeff() / piv.minCoeff();
  }
  if (onb.pivot_ratio > kPivotRatioLimit)
    throw Error(ErrorCode::IllConditioned, fmt::format("Cholesky pivot ratio {:.3e} exceeds 1e14", onb.pivot_ratio));
  return onb;
}

Eigen::MatrixXd OrthonormalTransform::matrix() const {
  if (diagonal) return inv_sqrt.asDiagonal();
  const auto n = lower.rows();
  // C = L^-T
  return lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd OrthonormalTransform::solve(const Eigen::VectorXd& b) const {
  if (diagonal) return (b.array() * inv_sqrt.array().square()).matrix();
  const Eigen::VectorXd y = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

double log_kernel(const WeightSymbol& symbol, const std::vector<Exponent>& exponents, const OrthonormalTransform& onb,
                  int m, const Point& t) {
  const double mu = m * symbol.value(t);
  const std::size_t n = exponents.size();
  if (onb.diagonal) {
    // B = sum_k exp(L_k - log G_kk) with L_k = <k,t> - m u
    std::vector<double> terms(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      terms[k] = dot(exponents[k], t) - mu - onb.shifts[i] + 2.0 * std::log(onb.inv_sqrt[i]);
    }
    return log_sum_exp(terms);
  }
  // B = e^T G^-1 e with scaled evaluation vector e_k = exp((L_k - s_k) / 2)
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    e[i] = std::exp(0.5 * (dot(exponents[k], t) - mu - onb.shifts[i]));
  }
  const Eigen::VectorXd y = onb.lower.triangularView<Eigen::Lower>().solve(e);
  return std::log(y.squaredNorm());
}

KernelGrid kernel_eval(const Model& model, const RestrictionMap& rmap, const OrthonormalTransform& onb, int m,
                       const LogGrid& zgrid) {
  KernelGrid out;
  out.m = m;
  out.grid = zgrid;
  out.image_dims = rmap.image_dims();
  out.values.resize(zgrid.size());
  out.log_values.resize(zgrid.size());
  const WeightSymbol& sym = model.restricted_symbol();
  for (std::size_t i = 0; i < zgrid.size(); ++i) {
    out.log_values[i] = log_kernel(sym, rmap.target_exponents, onb, m, zgrid.point(i));
    out.values[i] = std::exp(out.log_values[i]);
  }
  return out;
}

double kernel_trace(const Model& model, const RestrictionMap& rmap, const OrthonormalTransform& onb, int m,
                    const QuadratureOptions& options) {
  const WeightSymbol& sym = model.restricted_symbol();
  const QuadratureRule rule = reference_rule(sym.reference, options);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    sum += rule.weights[q] * std::exp(log_kernel(sym, rmap.target_exponents, onb, m, rule.nodes[q]));
  return sum;
}

FsPotential fs_potential(const Model& model, const KernelGrid& kernel) {
  FsPotential out;
  out.m = kernel.m;
  out.grid = kernel.grid;
  out.values.resize(kernel.grid.size());
  const WeightSymbol& sym = model.restricted_symbol();
  for (std::size_t i = 0; i < kernel.grid.size(); ++i) {
    const double lb = kernel.log_values[i];
    if (!std::isfinite(lb)) {
      out.masked.push_back(i);
      out.values[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.values[i] = sym.value(kernel.grid.point(i)) + lb / kernel.m;
  }
  if (out.masked.size() == kernel.grid.size())
    throw Error(ErrorCode::LogOfZero, fmt::format("kernel vanishes on the whole grid at m={}", kernel.m));
  return out;
}

FsPotential fs_potential(const Model& model, const RestrictionMap& rmap, int m, const LogGrid& zgrid) {
  const OrthonormalTransform onb = orthonormalize(gram(model, rmap, m));
  return fs_potential(model, kernel_eval(model, rmap, onb, m, zgrid));
}

// ---------------------------------------------------------------------------

namespace {

struct FiberLogs {
  std::vector<double> log_gz;      // log G_Z(k)
  std::vector<double> log_inv_m;   // log of 1 / sum_{a in fiber} 1/G_X(a)
  std::vector<double> log_gx;      // log G_X(a)
};

FiberLogs fiber_logs(const Model& model, const RestrictionMap& rmap, int m) {
  const GramMatrix gz = gram(model, rmap, m);
  const GramMatrix gx = ambient_gram(model, rmap);
  FiberLogs f;
  for (std::size_t a = 0; a < gx.basis_size(); ++a) f.log_gx.push_back(gx.log_diagonal(a));
  for (std::size_t k = 0; k < rmap.image_dims(); ++k) {
    f.log_gz.push_back(gz.log_diagonal(k));
    std::vector<double> inv;
    for (int a : rmap.fibers[k]) inv.push_back(-f.log_gx[a]);
    f.log_inv_m.push_back(-log_sum_exp(inv));
  }
  return f;
}

}  // namespace

ExtensionResult minimal_norm_extension(const Model& model, const RestrictionMap& rmap, int m,
                                       const Eigen::VectorXd& section) {
  if (static_cast<std::size_t>(section.size()) != rmap.image_dims())
    throw Error(ErrorCode::NotInImage,
                fmt::format("section has {} coefficients, image has dimension {}", section.size(), rmap.image_dims()));
  const FiberLogs f = fiber_logs(model, rmap, m);
  // With diagonal Grams, c_a = s_k G_X(a)^-1 / sum_{b in fiber k} G_X(b)^-1.
  ExtensionResult out;
  out.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rmap.source.size()));
  std::vector<double> num, den;
  for (std::size_t k = 0; k < rmap.image_dims(); ++k) {
    const double s = section[static_cast<Eigen::Index>(k)];
    for (int a : rmap.fibers[k]) out.coefficients[a] = s * std::exp(f.log_inv_m[k] - f.log_gx[a]);
    if (s == 0.0) continue;
    const double ls = 2.0 * std::log(std::abs(s));
    num.push_back(ls + f.log_inv_m[k]);
    den.push_back(ls + f.log_gz[k]);
  }
  if (num.empty()) throw Error(ErrorCode::NotInImage, "zero section has no extension ratio");
  out.ratio = std::exp(log_sum_exp(num) - log_sum_exp(den));
  return out;
}

ExtensionReport extension_report(const Model& model, const RestrictionMap& rmap, int m) {
  const FiberLogs f = fiber_logs(model, rmap, m);
  ExtensionReport rep;
  rep.m = m;
  for (std::size_t k = 0; k < rmap.image_dims(); ++k) rep.per_basis.push_back(std::exp(f.log_inv_m[k] - f.log_gz[k]));
  rep.operator_norm = *std::max_element(rep.per_basis.begin(), rep.per_basis.end());
  return rep;
}

ExtensionReport extension_report_dense(const GramMatrix& gz, const GramMatrix& gx, const Eigen::MatrixXd& R) {
  // R~ = D_Z R D_X^-1; A = (R~ G^_X^-1 R~^T)^-1; norm = top eigenvalue of (A, G^_Z).
  const Eigen::VectorXd dz = (0.5 * gz.shifts.array()).exp().matrix();
  const Eigen::VectorXd dxi = (-0.5 * gx.shifts.array()).exp().matrix();
  const Eigen::MatrixXd Rt = dz.asDiagonal() * R * dxi.asDiagonal();
  const Eigen::LLT<Eigen::MatrixXd> lx(gx.dense_scaled());
  if (lx.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "ambient Gram is not positive definite");
  const Eigen::MatrixXd M = Rt * lx.solve(Rt.transpose());
  const Eigen::MatrixXd A = M.llt().solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
  const Eigen::MatrixXd Asym = 0.5 * (A + A.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Asym, gz.dense_scaled());
  ExtensionReport rep;
  rep.m = gz.m;
  rep.operator_norm = es.eigenvalues().maxCoeff();
  const Eigen::MatrixXd gzs = gz.dense_scaled();
  for (Eigen::Index k = 0; k < A.rows(); ++k) rep.per_basis.push_back(A(k, k) / gzs(k, k));
  return rep;
}

ExtremalCheck extremal_check(const Model& model, const RestrictionMap& rmap, const GramMatrix& g, int m,
                             const Point& t) {
  const WeightSymbol& sym = model.restricted_symbol();
  const OrthonormalTransform onb = orthonormalize(g);
  ExtremalCheck out;
  out.kernel = std::exp(log_kernel(sym, rmap.target_exponents, onb, m, t));

  const auto n = static_cast<Eigen::Index>(rmap.image_dims());
  const double mu = m * sym.value(t);
  Eigen::VectorXd e(n);
  for (Eigen::Index k = 0; k < n; ++k) e[k] = std::exp(0.5 * (dot(rmap.target_exponents[k], t) - mu - g.shifts[k]));
  // sup_s |<s, e>|^2 / s^T G^ s is the top eigenvalue of (e e^T, G^).
  const Eigen::MatrixXd E = e * e.transpose();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(E, g.dense_scaled());
  out.rayleigh = es.eigenvalues().maxCoeff();
  out.relative_gap = std::abs(out.rayleigh - out.kernel) / std::max(out.kernel, 1e-300);
  return out;
}

}  // namespace rbk
