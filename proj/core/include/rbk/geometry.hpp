#pragma once

// Toric model spaces: moment polytopes, subvarieties, weight symbols in
// logarithmic coordinates, and the grids they are sampled on.
//
// Conventions. A point of the open torus orbit has log coordinates
// t_k = log|z_k|^2. A torus-invariant metric on L is encoded by a convex
// symbol u(t) whose gradient image is the interior of the moment polytope P,
// and |z^alpha|^2 h^m = exp(<alpha, t> - m u(t)). The reference Monge-Ampere
// measure of a symbol is p! det(Hess u) dt, of total mass p! vol(P).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <boost/rational.hpp>

namespace rbk {

using Rational = boost::rational<std::int64_t>;

/// Log-coordinate point. One-dimensional spaces use only the first entry.
using Point = Eigen::Vector2d;
using Hessian = Eigen::Matrix2d;

/// Lattice point of mP. One-dimensional spaces use only the first entry.
using Exponent = std::array<std::int64_t, 2>;

// ---------------------------------------------------------------------------
// Moment polytopes

enum class PolytopeKind { Interval, Rectangle, Simplex };

std::string to_string(PolytopeKind kind);

class MomentPolytope {
 public:
  /// [0, a]
  static MomentPolytope interval(Rational a);
  /// [0, a] x [0, b]
  static MomentPolytope rectangle(Rational a, Rational b);
  /// {x, y >= 0, x + y <= a}
  static MomentPolytope simplex(Rational a);

  PolytopeKind kind() const { return kind_; }
  int dim() const { return kind_ == PolytopeKind::Interval ? 1 : 2; }
  Rational a() const { return a_; }
  Rational b() const { return b_; }

  /// Rational vertices, counter-clockwise for polygons.
  std::vector<std::array<Rational, 2>> vertices() const;

  /// Smallest integer level at which every vertex is a lattice point.
  std::int64_t level() const;

  /// Euclidean volume (length or area).
  double volume() const;

  /// dim! * volume, the total Monge-Ampere mass (L^n).
  double normalized_volume() const;

  /// Vertices as doubles, counter-clockwise. For intervals: {0, a}.
  std::vector<Point> polygon() const;

  /// Whether alpha lies in m P.
  bool contains(const Exponent& alpha, int m) const;

  /// Whether a real point lies in the closed polytope, with slack.
  bool contains(const Point& x, double slack = 0.0) const;

  /// Whether a real point lies in the open interior, with margin.
  bool interior_contains(const Point& x, double margin = 0.0) const;

  bool operator==(const MomentPolytope& other) const;

  /// Human-readable description, e.g. "Rectangle(1,1)".
  std::string describe() const;

 private:
  MomentPolytope(PolytopeKind kind, Rational a, Rational b);

  PolytopeKind kind_;
  Rational a_;
  Rational b_;
};

// ---------------------------------------------------------------------------
// Subvarieties

enum class SubvarietyKind { Ambient, CoordinateCurve, DiagonalCurve, LineInP2 };

std::string to_string(SubvarietyKind kind);

/// The subvariety Z of the pair (X|Z).
///
/// CoordinateCurve(axis k) is the toric divisor {z_k = 0}: the face of P where
/// alpha_k = 0, parametrized by the remaining coordinate. DiagonalCurve is the
/// closure of {z_0 = z_1} in P^1 x P^1. LineInP2 is the line {z_0 = z_1} in P^2
/// through [0:0:1]; it is not a torus-invariant divisor, so restriction sends
/// degree-m monomials onto all degree <= m polynomials in the line coordinate.
struct SubvarietyDescriptor {
  SubvarietyKind kind = SubvarietyKind::Ambient;
  int axis = 0;
  MomentPolytope ambient = MomentPolytope::interval(1);

  /// Complex dimension of Z.
  int p() const;

  /// Throws IncompatibleSubvariety when the kind does not fit the ambient polytope.
  void validate() const;

  /// Polytope of the restricted line bundle on Z (the slope constraint of the
  /// restricted envelope). For Ambient this is the ambient polytope.
  MomentPolytope restricted_polytope() const;

  /// Map from the log coordinate of Z to log coordinates of X. Coordinates
  /// sent to a face take the value -infinity.
  Point embed(double t) const;

  /// Direction of the (affine) embedding: embed(t) = base + t * direction.
  Point embed_direction() const;
};

// ---------------------------------------------------------------------------
// Reference symbols

enum class ReferenceKind {
  FubiniStudy,  ///< a log(1 + e^t) on [0, a]
  Product,      ///< a log(1 + e^t0) + b log(1 + e^t1) on [0, a] x [0, b]
  Simplex,      ///< a log(1 + e^t0 + e^t1) on the simplex of size a
  Logistic,     ///< c log(1 + lambda e^t) on [0, c]; arises on restriction
};

std::string to_string(ReferenceKind kind);

class ReferenceSymbol {
 public:
  static ReferenceSymbol fubini_study(double a = 1.0);
  static ReferenceSymbol product(double a = 1.0, double b = 1.0);
  static ReferenceSymbol simplex(double a = 1.0);
  static ReferenceSymbol logistic(double c, double lambda);

  /// Canonical reference of a polytope (its toric Fubini-Study type symbol).
  static ReferenceSymbol canonical(const MomentPolytope& polytope);

  ReferenceKind kind() const { return kind_; }
  int dim() const { return kind_ == ReferenceKind::Product || kind_ == ReferenceKind::Simplex ? 2 : 1; }
  double scale_a() const { return a_; }
  double scale_b() const { return b_; }
  double lambda() const { return lambda_; }

  double value(const Point& t) const;
  Point gradient(const Point& t) const;
  Hessian hessian(const Point& t) const;

  /// Inverse of the gradient map: the log point whose gradient is x, for x in
  /// the open gradient image.
  Point from_moment(const Point& x) const;

  /// The polytope equal to the closure of the gradient image.
  MomentPolytope gradient_polytope() const;

 private:
  ReferenceSymbol(ReferenceKind kind, double a, double b, double lambda);

  ReferenceKind kind_;
  double a_;
  double b_;
  double lambda_;
};

// ---------------------------------------------------------------------------
// Perturbations

struct ConstantTerm {
  double value = 0.0;
};

/// <slope, t>. Unbounded; intended for curvature checks, not for scenarios.
struct AffineTerm {
  Point slope = Point::Zero();
};

/// scale * |t|^2 / 2. Unbounded; intended for curvature checks.
struct QuadraticTerm {
  double scale = 1.0;
};

/// amplitude * exp(-|t - center|^2 / width^2)
struct GaussianBump {
  double amplitude = 1.0;
  Point center = Point::Zero();
  double width = 1.0;
};

/// amplitude * tanh(<direction, t>): a bounded tilt between -amplitude and amplitude.
struct TanhTilt {
  double amplitude = 0.1;
  Point direction = Point(1.0, 0.0);
};

using PerturbationTerm = std::variant<ConstantTerm, AffineTerm, QuadraticTerm, GaussianBump, TanhTilt>;

/// Sum of closed-form terms g(t), optionally pulled back along a curve.
class Perturbation {
 public:
  Perturbation() = default;
  explicit Perturbation(std::vector<PerturbationTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<PerturbationTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool bounded() const;

  double value(const Point& t) const;
  Point gradient(const Point& t) const;
  Hessian hessian(const Point& t) const;

  /// The perturbation t -> g(embed(t)) on a curve.
  Perturbation pulled_back(const SubvarietyDescriptor& sub) const;

  /// g + c.
  Perturbation shifted(double c) const;

 private:
  std::vector<PerturbationTerm> terms_;
  std::optional<SubvarietyDescriptor> pullback_;
};

// ---------------------------------------------------------------------------
// Weight symbols and grids

/// u = u0 + g on the truncated domain [-T, T]^dim.
struct WeightSymbol {
  ReferenceSymbol reference = ReferenceSymbol::fubini_study();
  Perturbation perturbation;
  double halfwidth = 12.0;

  int dim() const { return reference.dim(); }
  double value(const Point& t) const { return reference.value(t) + perturbation.value(t); }
  Point gradient(const Point& t) const { return reference.gradient(t) + perturbation.gradient(t); }
  Hessian hessian(const Point& t) const { return reference.hessian(t) + perturbation.hessian(t); }

  /// Density of the reference measure p! det(Hess u0) with respect to dt.
  double reference_density(const Point& t) const;

  WeightSymbol shifted(double c) const;
};

/// Uniform lattice on [-T, T]^dim with n points per axis.
struct LogGrid {
  int dim = 1;
  int n_per_axis = 257;
  double halfwidth = 12.0;

  static LogGrid make(int dim, int n_per_axis, double halfwidth);

  double spacing() const { return 2.0 * halfwidth / (n_per_axis - 1); }
  std::size_t size() const;
  double coordinate(int i) const { return -halfwidth + spacing() * i; }

  /// Flat index (i0 * n + i1 in two dimensions).
  std::size_t index(int i0, int i1 = 0) const;
  std::array<int, 2> multi_index(std::size_t flat) const;
  Point point(std::size_t flat) const;

  bool is_interior(std::size_t flat) const;
  /// |t_k| <= halfwidth / 2 in every coordinate.
  bool in_inner_half(std::size_t flat) const;

  /// Same domain, n_per_axis refined to 2(n-1)+1.
  LogGrid refined() const;

  /// Throws GridTooCoarse unless n >= 33 and odd.
  void validate() const;
};

struct CurvatureField {
  LogGrid grid;
  /// Second-difference Hessians; boundary rows copy their nearest interior neighbor.
  std::vector<Hessian> hessians;
  /// Closed-form Hessian of the same symbol.
  std::function<Hessian(const Point&)> analytic;
};

/// Second-difference Hessian of a sampled function at an interior grid point.
Hessian discrete_hessian(const LogGrid& grid, const std::vector<double>& samples, std::size_t flat);

// ---------------------------------------------------------------------------
// Model

/// A geometric space on which kernels and envelopes live: X itself or Z.
struct Space {
  WeightSymbol symbol;
  MomentPolytope polytope = MomentPolytope::interval(1);
  LogGrid grid;
  int p = 1;
};

class Model {
 public:
  const MomentPolytope& polytope() const { return polytope_; }
  const SubvarietyDescriptor& subvariety() const { return sub_; }
  const WeightSymbol& weight() const { return weight_; }
  const LogGrid& grid() const { return grid_; }
  int p() const { return sub_.p(); }

  /// Symbol of the restricted weight on Z (identical to weight() for Ambient).
  const WeightSymbol& restricted_symbol() const { return restricted_; }
  const LogGrid& z_grid() const { return z_grid_; }
  const CurvatureField& curvature() const { return curvature_; }

  /// The ambient space X or the subvariety Z, with symbol, polytope and grid.
  Space space(bool on_z) const;

  /// u sampled on grid() and u_Z sampled on z_grid().
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<double>& z_samples() const { return z_samples_; }

  /// Same geometry with a different weight perturbation.
  Model with_perturbation(const Perturbation& g) const;

  /// Same geometry on a different grid.
  Model with_grid(const LogGrid& grid) const;

 private:
  friend Model build_model(const MomentPolytope&, const SubvarietyDescriptor&, const WeightSymbol&, const LogGrid&);
  Model() = default;

  MomentPolytope polytope_ = MomentPolytope::interval(1);
  SubvarietyDescriptor sub_;
  WeightSymbol weight_;
  LogGrid grid_;
  WeightSymbol restricted_;
  LogGrid z_grid_;
  CurvatureField curvature_;
  std::vector<double> samples_;
  std::vector<double> z_samples_;
};

/// Validates and bundles the inputs. Errors: IncompatibleSubvariety,
/// NonAmpleReference, GridTooCoarse.
Model build_model(const MomentPolytope& polytope, const SubvarietyDescriptor& sub, const WeightSymbol& weight,
                  const LogGrid& grid);

/// Pullback of the weight symbol to Z.
WeightSymbol restrict_symbol(const Model& model);

CurvatureField curvature_field(const Model& model);

/// Curvature field of an arbitrary symbol on a grid.
CurvatureField curvature_field(const WeightSymbol& symbol, const LogGrid& grid);

/// Samples a symbol on every grid point.
std::vector<double> sample(const WeightSymbol& symbol, const LogGrid& grid);

/// Numerically stable log(1 + e^x).
double softplus(double x);
/// Logistic function 1 / (1 + e^-x).
double sigmoid(double x);

}  // namespace rbk
