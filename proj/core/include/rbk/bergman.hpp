#pragma once

// Weighted Gram matrices of monomial sections, orthonormal frames, the
// restricted Bergman kernel and the minimal-norm extension operator.
//
// Magnitudes. At m = 64 raw integrands exp(<k,t> - m u) fall far below the
// double range, so every row k carries a log shift s_k (the maximum of its
// log-integrand over the quadrature nodes). The stored matrix is
// G^ = D^-1 G D^-1 with D = diag(exp(s / 2)); all solves happen on G^.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rbk/geometry.hpp"
#include "rbk/quadrature.hpp"
#include "rbk/sections.hpp"

namespace rbk {

struct GramMatrix {
  int m = 1;
  std::vector<Exponent> exponents;
  /// Row log shifts s_k.
  Eigen::VectorXd shifts;
  /// Scaled matrix G^. Diagonal Grams store only the diagonal in `scaled_diagonal`.
  Eigen::MatrixXd scaled;
  Eigen::VectorXd scaled_diagonal;
  bool diagonal = true;
  std::string rule_tag;
  std::size_t nodes = 0;

  std::size_t basis_size() const { return static_cast<std::size_t>(shifts.size()); }

  /// log G_kk.
  double log_diagonal(std::size_t k) const;
  /// G^ as a dense matrix.
  Eigen::MatrixXd dense_scaled() const;
  /// G itself; entries may overflow or underflow for large m.
  Eigen::MatrixXd dense() const;

  /// Wraps an explicit symmetric matrix (no shifts).
  static GramMatrix from_matrix(const Eigen::MatrixXd& g);
};

struct OrthonormalTransform {
  /// C with C^T G^ C = I (scaled coordinates), C = L^-T for G^ = L L^T.
  Eigen::MatrixXd matrix() const;
  /// Solves G^ x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  Eigen::VectorXd shifts;
  bool diagonal = true;
  /// Diagonal case: 1 / sqrt(G^_kk).
  Eigen::VectorXd inv_sqrt;
  /// Dense case: lower Cholesky factor of G^.
  Eigen::MatrixXd lower;
  /// Largest over smallest squared Cholesky pivot.
  double pivot_ratio = 1.0;
};

struct KernelGrid {
  int m = 1;
  LogGrid grid;
  std::vector<double> values;
  std::vector<double> log_values;
  std::size_t image_dims = 0;
};

struct FsPotential {
  int m = 1;
  LogGrid grid;
  std::vector<double> values;
  /// Grid points where the kernel underflowed to zero.
  std::vector<std::size_t> masked;
};

struct ExtensionResult {
  /// Coefficients on the ambient monomial basis.
  Eigen::VectorXd coefficients;
  /// ||extension||^2_X / ||section||^2_Z.
  double ratio = 0.0;
};

struct ExtensionReport {
  int m = 1;
  double operator_norm = 0.0;
  /// Ratio for each image basis monomial.
  std::vector<double> per_basis;
};

struct ExtremalCheck {
  double kernel = 0.0;
  double rayleigh = 0.0;
  double relative_gap = 0.0;
};

/// Gram of monomials z^k against exp(-m u) times the reference measure of u's reference.
GramMatrix gram_of(const WeightSymbol& symbol, const std::vector<Exponent>& exponents, int m,
                   const QuadratureOptions& options = {});

/// Gram of the restricted image basis on Z. Errors: QuadratureUnderflow, NotPositiveDefinite.
GramMatrix gram(const Model& model, const RestrictionMap& rmap, int m, const QuadratureOptions& options = {});

/// Errors: NotPositiveDefinite, IllConditioned (pivot ratio above 1e14).
OrthonormalTransform orthonormalize(const GramMatrix& g);

/// log B(t) for the frame of a Gram of monomials `exponents` on `symbol`.
double log_kernel(const WeightSymbol& symbol, const std::vector<Exponent>& exponents, const OrthonormalTransform& onb,
                  int m, const Point& t);

KernelGrid kernel_eval(const Model& model, const RestrictionMap& rmap, const OrthonormalTransform& onb, int m,
                       const LogGrid& zgrid);

/// Integral of B against the reference measure of Z using an independent rule.
double kernel_trace(const Model& model, const RestrictionMap& rmap, const OrthonormalTransform& onb, int m,
                    const QuadratureOptions& options = QuadratureOptions{}.refined());

/// u_m = u_Z + (1/m) log B on zgrid. Errors: LogOfZero when every point is masked.
FsPotential fs_potential(const Model& model, const RestrictionMap& rmap, int m, const LogGrid& zgrid);
FsPotential fs_potential(const Model& model, const KernelGrid& kernel);

/// Ambient Gram on X of the full basis of rmap.
GramMatrix ambient_gram(const Model& model, const RestrictionMap& rmap, const QuadratureOptions& options = {});

/// Minimal-norm ambient extension of the section with image-basis coefficients `section`.
ExtensionResult minimal_norm_extension(const Model& model, const RestrictionMap& rmap, int m,
                                       const Eigen::VectorXd& section);

/// Operator norm of the minimal-norm extension over the unit sphere of the restricted space.
ExtensionReport extension_report(const Model& model, const RestrictionMap& rmap, int m);

/// Same computation from explicit Grams: solves with dense factorizations and a
/// generalized eigenproblem, without using diagonal structure.
ExtensionReport extension_report_dense(const GramMatrix& gz, const GramMatrix& gx, const Eigen::MatrixXd& restriction);

/// Compares B(t) with the maximum of |s(t)|^2 / ||s||^2 over the restricted space.
ExtremalCheck extremal_check(const Model& model, const RestrictionMap& rmap, const GramMatrix& g, int m,
                             const Point& t);

}  // namespace rbk
