#include "rbk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

std::string rational_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

bool same_scale(double x, const Rational& r) { return std::abs(x - to_double(r)) <= 1e-12 * std::max(1.0, std::abs(x)); }

// sigma(x) * sigma(-x) without cancellation in the tails.
double logistic_curvature(double x) { return sigmoid(x) * sigmoid(-x); }

}  // namespace

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------

std::string to_string(PolytopeKind kind) {
  switch (kind) {
    case PolytopeKind::Interval: return "Interval";
    case PolytopeKind::Rectangle: return "Rectangle";
    case PolytopeKind::Simplex: return "Simplex";
  }
  return "?";
}

MomentPolytope::MomentPolytope(PolytopeKind kind, Rational a, Rational b) : kind_(kind), a_(a), b_(b) {
  if (a_ <= 0 || b_ <= 0) throw Error(ErrorCode::ValidationError, "polytope side lengths must be positive");
}

MomentPolytope MomentPolytope::interval(Rational a) { return MomentPolytope(PolytopeKind::Interval, a, a); }
MomentPolytope MomentPolytope::rectangle(Rational a, Rational b) { return MomentPolytope(PolytopeKind::Rectangle, a, b); }
MomentPolytope MomentPolytope::simplex(Rational a) { return MomentPolytope(PolytopeKind::Simplex, a, a); }

std::vector<std::array<Rational, 2>> MomentPolytope::vertices() const {
  const Rational z(0);
  switch (kind_) {
    case PolytopeKind::Interval: return {{z, z}, {a_, z}};
    case PolytopeKind::Rectangle: return {{z, z}, {a_, z}, {a_, b_}, {z, b_}};
    case PolytopeKind::Simplex: return {{z, z}, {a_, z}, {z, a_}};
  }
  return {};
}

std::int64_t MomentPolytope::level() const { return std::lcm(a_.denominator(), b_.denominator()); }

double MomentPolytope::volume() const {
  switch (kind_) {
    case PolytopeKind::Interval: return to_double(a_);
    case PolytopeKind::Rectangle: return to_double(a_ * b_);
    case PolytopeKind::Simplex: return to_double(a_ * a_ / 2);
  }
  return 0.0;
}

double MomentPolytope::normalized_volume() const { return dim() == 1 ? volume() : 2.0 * volume(); }

std::vector<Point> MomentPolytope::polygon() const {
  std::vector<Point> out;
  for (const auto& v : vertices()) out.emplace_back(to_double(v[0]), to_double(v[1]));
  return out;
}

bool MomentPolytope::contains(const Exponent& alpha, int m) const {
  // alpha_k <= m * a  <=>  alpha_k * den <= m * num
  auto below = [m](std::int64_t x, const Rational& r) { return x * r.denominator() <= m * r.numerator(); };
  switch (kind_) {
    case PolytopeKind::Interval: return alpha[0] >= 0 && below(alpha[0], a_) && alpha[1] == 0;
    case PolytopeKind::Rectangle: return alpha[0] >= 0 && alpha[1] >= 0 && below(alpha[0], a_) && below(alpha[1], b_);
    case PolytopeKind::Simplex: return alpha[0] >= 0 && alpha[1] >= 0 && below(alpha[0] + alpha[1], a_);
  }
  return false;
}

bool MomentPolytope::contains(const Point& x, double slack) const { return interior_contains(x, -slack); }

bool MomentPolytope::interior_contains(const Point& x, double margin) const {
  const double a = to_double(a_);
  const double b = to_double(b_);
  switch (kind_) {
    case PolytopeKind::Interval: return x[0] > margin && x[0] < a - margin;
    case PolytopeKind::Rectangle: return x[0] > margin && x[0] < a - margin && x[1] > margin && x[1] < b - margin;
    case PolytopeKind::Simplex:
      return x[0] > margin && x[1] > margin && (x[0] + x[1]) < a - margin * std::sqrt(2.0);
  }
  return false;
}

bool MomentPolytope::operator==(const MomentPolytope& other) const {
  return kind_ == other.kind_ && a_ == other.a_ && (kind_ != PolytopeKind::Rectangle || b_ == other.b_);
}

std::string MomentPolytope::describe() const {
  if (kind_ == PolytopeKind::Rectangle)
    return fmt::format("Rectangle({},{})", rational_string(a_), rational_string(b_));
  return fmt::format("{}({})", to_string(kind_), rational_string(a_));
}

// ---------------------------------------------------------------------------

std::string to_string(SubvarietyKind kind) {
  switch (kind) {
    case SubvarietyKind::Ambient: return "Ambient";
    case SubvarietyKind::CoordinateCurve: return "CoordinateCurve";
    case SubvarietyKind::DiagonalCurve: return "DiagonalCurve";
    case SubvarietyKind::LineInP2: return "LineInP2";
  }
  return "?";
}

int SubvarietyDescriptor::p() const { return kind == SubvarietyKind::Ambient ? ambient.dim() : 1; }

void SubvarietyDescriptor::validate() const {
  switch (kind) {
    case SubvarietyKind::Ambient: return;
    case SubvarietyKind::CoordinateCurve:
      if (ambient.dim() != 2)
        throw Error(ErrorCode::IncompatibleSubvariety, "CoordinateCurve needs a two-dimensional ambient polytope");
      if (axis != 0 && axis != 1) throw Error(ErrorCode::IncompatibleSubvariety, "CoordinateCurve axis must be 0 or 1");
      return;
    case SubvarietyKind::DiagonalCurve:
      if (ambient.kind() != PolytopeKind::Rectangle)
        throw Error(ErrorCode::IncompatibleSubvariety, "DiagonalCurve requires a Rectangle, got " + ambient.describe());
      return;
    case SubvarietyKind::LineInP2:
      if (ambient.kind() != PolytopeKind::Simplex)
        throw Error(ErrorCode::IncompatibleSubvariety, "LineInP2 requires a Simplex, got " + ambient.describe());
      return;
  }
}

MomentPolytope SubvarietyDescriptor::restricted_polytope() const {
  switch (kind) {
    case SubvarietyKind::Ambient: return ambient;
    case SubvarietyKind::CoordinateCurve:
      // The face alpha_axis = 0 is parametrized by the other coordinate.
      if (ambient.kind() == PolytopeKind::Rectangle)
        return MomentPolytope::interval(axis == 0 ? ambient.b() : ambient.a());
      return MomentPolytope::interval(ambient.a());
    case SubvarietyKind::DiagonalCurve: return MomentPolytope::interval(ambient.a() + ambient.b());
    case SubvarietyKind::LineInP2: return MomentPolytope::interval(ambient.a());
  }
  return ambient;
}

Point SubvarietyDescriptor::embed(double t) const {
  switch (kind) {
    case SubvarietyKind::Ambient: return Point(t, 0.0);
    case SubvarietyKind::CoordinateCurve: return axis == 0 ? Point(-kInf, t) : Point(t, -kInf);
    case SubvarietyKind::DiagonalCurve:
    case SubvarietyKind::LineInP2: return Point(t, t);
  }
  return Point(t, 0.0);
}

Point SubvarietyDescriptor::embed_direction() const {
  switch (kind) {
    case SubvarietyKind::Ambient: return Point(1.0, 0.0);
    case SubvarietyKind::CoordinateCurve: return axis == 0 ? Point(0.0, 1.0) : Point(1.0, 0.0);
    case SubvarietyKind::DiagonalCurve:
    case SubvarietyKind::LineInP2: return Point(1.0, 1.0);
  }
  return Point(1.0, 0.0);
}

// ---------------------------------------------------------------------------

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::FubiniStudy: return "FubiniStudy";
    case ReferenceKind::Product: return "Product";
    case ReferenceKind::Simplex: return "Simplex";
    case ReferenceKind::Logistic: return "Logistic";
  }
  return "?";
}

ReferenceSymbol::ReferenceSymbol(ReferenceKind kind, double a, double b, double lambda)
    : kind_(kind), a_(a), b_(b), lambda_(lambda) {
  if (!(a_ > 0) || !(b_ > 0) || !(lambda_ > 0))
    throw Error(ErrorCode::ValidationError, "reference symbol parameters must be positive");
}

ReferenceSymbol ReferenceSymbol::fubini_study(double a) { return ReferenceSymbol(ReferenceKind::FubiniStudy, a, a, 1.0); }
ReferenceSymbol ReferenceSymbol::product(double a, double b) { return ReferenceSymbol(ReferenceKind::Product, a, b, 1.0); }
ReferenceSymbol ReferenceSymbol::simplex(double a) { return ReferenceSymbol(ReferenceKind::Simplex, a, a, 1.0); }
ReferenceSymbol ReferenceSymbol::logistic(double c, double lambda) {
  return ReferenceSymbol(ReferenceKind::Logistic, c, c, lambda);
}

ReferenceSymbol ReferenceSymbol::canonical(const MomentPolytope& polytope) {
  const double a = to_double(polytope.a());
  switch (polytope.kind()) {
    case PolytopeKind::Interval: return fubini_study(a);
    case PolytopeKind::Rectangle: return product(a, to_double(polytope.b()));
    case PolytopeKind::Simplex: return simplex(a);
  }
  return fubini_study(a);
}

double ReferenceSymbol::value(const Point& t) const {
  switch (kind_) {
    case ReferenceKind::FubiniStudy: return a_ * softplus(t[0]);
    case ReferenceKind::Logistic: return a_ * softplus(t[0] + std::log(lambda_));
    case ReferenceKind::Product: return a_ * softplus(t[0]) + b_ * softplus(t[1]);
    case ReferenceKind::Simplex: {
      const double top = std::max({0.0, t[0], t[1]});
      return a_ * (top + std::log(std::exp(-top) + std::exp(t[0] - top) + std::exp(t[1] - top)));
    }
  }
  return 0.0;
}

Point ReferenceSymbol::gradient(const Point& t) const {
  switch (kind_) {
    case ReferenceKind::FubiniStudy: return Point(a_ * sigmoid(t[0]), 0.0);
    case ReferenceKind::Logistic: return Point(a_ * sigmoid(t[0] + std::log(lambda_)), 0.0);
    case ReferenceKind::Product: return Point(a_ * sigmoid(t[0]), b_ * sigmoid(t[1]));
    case ReferenceKind::Simplex: {
      const double top = std::max({0.0, t[0], t[1]});
      const double e0 = std::exp(t[0] - top), e1 = std::exp(t[1] - top);
      const double z = std::exp(-top) + e0 + e1;
      return Point(a_ * e0 / z, a_ * e1 / z);
    }
  }
  return Point::Zero();
}

Hessian ReferenceSymbol::hessian(const Point& t) const {
  Hessian h = Hessian::Zero();
  switch (kind_) {
    case ReferenceKind::FubiniStudy: h(0, 0) = a_ * logistic_curvature(t[0]); break;
    case ReferenceKind::Logistic: h(0, 0) = a_ * logistic_curvature(t[0] + std::log(lambda_)); break;
    case ReferenceKind::Product:
      h(0, 0) = a_ * logistic_curvature(t[0]);
      h(1, 1) = b_ * logistic_curvature(t[1]);
      break;
    case ReferenceKind::Simplex: {
      const double top = std::max({0.0, t[0], t[1]});
      const double e0 = std::exp(t[0] - top), e1 = std::exp(t[1] - top), e2 = std::exp(-top);
      const double z = e0 + e1 + e2;
      const double p0 = e0 / z, p1 = e1 / z;
      // diag(p) - p p^T, with 1 - p_i written as a sum of the other weights
      h(0, 0) = a_ * p0 * (e1 + e2) / z;
      h(1, 1) = a_ * p1 * (e0 + e2) / z;
      h(0, 1) = h(1, 0) = -a_ * p0 * p1;
      break;
    }
  }
  return h;
}

Point ReferenceSymbol::from_moment(const Point& x) const {
  switch (kind_) {
    case ReferenceKind::FubiniStudy: return Point(std::log(x[0]) - std::log(a_ - x[0]), 0.0);
    case ReferenceKind::Logistic: return Point(std::log(x[0]) - std::log(lambda_ * (a_ - x[0])), 0.0);
    case ReferenceKind::Product:
      return Point(std::log(x[0]) - std::log(a_ - x[0]), std::log(x[1]) - std::log(b_ - x[1]));
    case ReferenceKind::Simplex: {
      const double rest = std::log(a_ - x[0] - x[1]);
      return Point(std::log(x[0]) - rest, std::log(x[1]) - rest);
    }
  }
  return Point::Zero();
}

MomentPolytope ReferenceSymbol::gradient_polytope() const {
  // Scales are doubles; approximate them by rationals with a fixed denominator.
  auto rat = [](double x) {
    const std::int64_t den = 1 << 20;
    return Rational(static_cast<std::int64_t>(std::llround(x * den)), den);
  };
  switch (kind_) {
    case ReferenceKind::FubiniStudy:
    case ReferenceKind::Logistic: return MomentPolytope::interval(rat(a_));
    case ReferenceKind::Product: return MomentPolytope::rectangle(rat(a_), rat(b_));
    case ReferenceKind::Simplex: return MomentPolytope::simplex(rat(a_));
  }
  return MomentPolytope::interval(rat(a_));
}

// ---------------------------------------------------------------------------

namespace {

struct TermEval {
  double value = 0.0;
  Point gradient = Point::Zero();
  Hessian hessian = Hessian::Zero();
};

// <d, t> skipping zero components so that a direction orthogonal to an
// infinite coordinate stays finite.
double guarded_dot(const Point& d, const Point& t) {
  double s = 0.0;
  for (int k = 0; k < 2; ++k)
    if (d[k] != 0.0) s += d[k] * t[k];
  return s;
}

TermEval evaluate(const PerturbationTerm& term, const Point& t) {
  TermEval out;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantTerm>) {
          out.value = g.value;
        } else if constexpr (std::is_same_v<T, AffineTerm>) {
          out.value = guarded_dot(g.slope, t);
          out.gradient = g.slope;
        } else if constexpr (std::is_same_v<T, QuadraticTerm>) {
          out.value = 0.5 * g.scale * t.squaredNorm();
          out.gradient = g.scale * t;
          out.hessian = g.scale * Hessian::Identity();
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          if (!std::isfinite(t[0]) || !std::isfinite(t[1])) return;
          const Point d = t - g.center;
          const double w2 = g.width * g.width;
          const double e = g.amplitude * std::exp(-d.squaredNorm() / w2);
          out.value = e;
          out.gradient = (-2.0 / w2) * e * d;
          out.hessian = e * ((4.0 / (w2 * w2)) * d * d.transpose() - (2.0 / w2) * Hessian::Identity());
        } else if constexpr (std::is_same_v<T, TanhTilt>) {
          const double s = guarded_dot(g.direction, t);
          if (!std::isfinite(s)) {
            out.value = s > 0 ? g.amplitude : -g.amplitude;
            return;
          }
          const double th = std::tanh(s);
          const double sech2 = 1.0 - th * th;
          out.value = g.amplitude * th;
          out.gradient = g.amplitude * sech2 * g.direction;
          out.hessian = (-2.0 * g.amplitude * th * sech2) * g.direction * g.direction.transpose();
        }
      },
      term);
  return out;
}

TermEval evaluate_all(const std::vector<PerturbationTerm>& terms, const Point& t) {
  TermEval sum;
  for (const auto& term : terms) {
    const TermEval e = evaluate(term, t);
    sum.value += e.value;
    sum.gradient += e.gradient;
    sum.hessian += e.hessian;
  }
  return sum;
}

}  // namespace

bool Perturbation::bounded() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const PerturbationTerm& t) {
    return std::holds_alternative<AffineTerm>(t) || std::holds_alternative<QuadraticTerm>(t);
  });
}

double Perturbation::value(const Point& t) const {
  if (pullback_) return evaluate_all(terms_, pullback_->embed(t[0])).value;
  return evaluate_all(terms_, t).value;
}

Point Perturbation::gradient(const Point& t) const {
  if (pullback_) {
    const Point d = pullback_->embed_direction();
    const Point g = evaluate_all(terms_, pullback_->embed(t[0])).gradient;
    return Point(d.dot(g), 0.0);
  }
  return evaluate_all(terms_, t).gradient;
}

Hessian Perturbation::hessian(const Point& t) const {
  if (pullback_) {
    const Point d = pullback_->embed_direction();
    Hessian h = Hessian::Zero();
    h(0, 0) = d.dot(evaluate_all(terms_, pullback_->embed(t[0])).hessian * d);
    return h;
  }
  return evaluate_all(terms_, t).hessian;
}

Perturbation Perturbation::pulled_back(const SubvarietyDescriptor& sub) const {
  if (sub.kind == SubvarietyKind::Ambient) return *this;
  if (pullback_) throw Error(ErrorCode::ValidationError, "perturbation is already pulled back");
  Perturbation out = *this;
  out.pullback_ = sub;
  return out;
}

Perturbation Perturbation::shifted(double c) const {
  Perturbation out = *this;
  out.terms_.push_back(ConstantTerm{c});
  return out;
}

// ---------------------------------------------------------------------------

double WeightSymbol::reference_density(const Point& t) const {
  const Hessian h = reference.hessian(t);
  return dim() == 1 ? h(0, 0) : 2.0 * h.determinant();
}

WeightSymbol WeightSymbol::shifted(double c) const {
  WeightSymbol out = *this;
  out.perturbation = perturbation.shifted(c);
  return out;
}

LogGrid LogGrid::make(int dim, int n_per_axis, double halfwidth) {
  LogGrid g;
  g.dim = dim;
  g.n_per_axis = n_per_axis;
  g.halfwidth = halfwidth;
  return g;
}

std::size_t LogGrid::size() const {
  const auto n = static_cast<std::size_t>(n_per_axis);
  return dim == 1 ? n : n * n;
}

std::size_t LogGrid::index(int i0, int i1) const {
  return dim == 1 ? static_cast<std::size_t>(i0) : static_cast<std::size_t>(i0) * n_per_axis + i1;
}

std::array<int, 2> LogGrid::multi_index(std::size_t flat) const {
  if (dim == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / n_per_axis), static_cast<int>(flat % n_per_axis)};
}

Point LogGrid::point(std::size_t flat) const {
  const auto [i0, i1] = multi_index(flat);
  return dim == 1 ? Point(coordinate(i0), 0.0) : Point(coordinate(i0), coordinate(i1));
}

bool LogGrid::is_interior(std::size_t flat) const {
  const auto [i0, i1] = multi_index(flat);
  const int last = n_per_axis - 1;
  if (i0 <= 0 || i0 >= last) return false;
  return dim == 1 || (i1 > 0 && i1 < last);
}

bool LogGrid::in_inner_half(std::size_t flat) const {
  const Point t = point(flat);
  const double lim = 0.5 * halfwidth + 1e-12;
  return std::abs(t[0]) <= lim && (dim == 1 || std::abs(t[1]) <= lim);
}

LogGrid LogGrid::refined() const { return make(dim, 2 * (n_per_axis - 1) + 1, halfwidth); }

void LogGrid::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::ValidationError, "grid dimension must be 1 or 2");
  if (!(halfwidth > 0)) throw Error(ErrorCode::ValidationError, "grid halfwidth T must be positive");
  if (n_per_axis < 33) throw Error(ErrorCode::GridTooCoarse, fmt::format("n_per_axis = {} < 33", n_per_axis));
  if (n_per_axis % 2 == 0) throw Error(ErrorCode::GridTooCoarse, fmt::format("n_per_axis = {} is even", n_per_axis));
}

Hessian discrete_hessian(const LogGrid& grid, const std::vector<double>& u, std::size_t flat) {
  const double h2 = grid.spacing() * grid.spacing();
  Hessian out = Hessian::Zero();
  const auto [i, j] = grid.multi_index(flat);
  if (grid.dim == 1) {
    out(0, 0) = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
    return out;
  }
  auto at = [&](int a, int b) { return u[grid.index(a, b)]; };
  out(0, 0) = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / h2;
  out(1, 1) = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / h2;
  out(0, 1) = out(1, 0) = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * h2);
  return out;
}

std::vector<double> sample(const WeightSymbol& symbol, const LogGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = symbol.value(grid.point(k));
  return out;
}

CurvatureField curvature_field(const WeightSymbol& symbol, const LogGrid& grid) {
  CurvatureField field;
  field.grid = grid;
  field.analytic = [symbol](const Point& t) { return symbol.hessian(t); };
  const std::vector<double> u = sample(symbol, grid);
  field.hessians.resize(grid.size());
  const int last = grid.n_per_axis - 1;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto [i, j] = grid.multi_index(k);
    i = std::clamp(i, 1, last - 1);
    if (grid.dim == 2) j = std::clamp(j, 1, last - 1);
    field.hessians[k] = discrete_hessian(grid, u, grid.index(i, j));
  }
  return field;
}

// ---------------------------------------------------------------------------

WeightSymbol restrict_symbol(const Model& model) { return model.restricted_symbol(); }

CurvatureField curvature_field(const Model& model) { return model.curvature(); }

namespace {

ReferenceSymbol restricted_reference(const SubvarietyDescriptor& sub, const ReferenceSymbol& ref) {
  switch (sub.kind) {
    case SubvarietyKind::Ambient: return ref;
    case SubvarietyKind::CoordinateCurve: {
      // Only the factor transverse to the face survives.
      if (ref.kind() == ReferenceKind::Product)
        return ReferenceSymbol::logistic(sub.axis == 0 ? ref.scale_b() : ref.scale_a(), 1.0);
      return ReferenceSymbol::logistic(ref.scale_a(), 1.0);
    }
    case SubvarietyKind::DiagonalCurve:
      // a log(1+e^t) + b log(1+e^t) = (a+b) log(1+e^t)
      return ReferenceSymbol::logistic(ref.scale_a() + ref.scale_b(), 1.0);
    case SubvarietyKind::LineInP2: return ReferenceSymbol::logistic(ref.scale_a(), 2.0);
  }
  return ref;
}

bool reference_matches(const ReferenceSymbol& ref, const MomentPolytope& P) {
  switch (ref.kind()) {
    case ReferenceKind::FubiniStudy:
    case ReferenceKind::Logistic: return P.kind() == PolytopeKind::Interval && same_scale(ref.scale_a(), P.a());
    case ReferenceKind::Product:
      return P.kind() == PolytopeKind::Rectangle && same_scale(ref.scale_a(), P.a()) && same_scale(ref.scale_b(), P.b());
    case ReferenceKind::Simplex: return P.kind() == PolytopeKind::Simplex && same_scale(ref.scale_a(), P.a());
  }
  return false;
}

}  // namespace

Model build_model(const MomentPolytope& polytope, const SubvarietyDescriptor& sub_in, const WeightSymbol& weight,
                  const LogGrid& grid) {
  SubvarietyDescriptor sub = sub_in;
  sub.ambient = polytope;
  sub.validate();
  if (!reference_matches(weight.reference, polytope))
    throw Error(ErrorCode::NonAmpleReference, fmt::format("{} reference has gradient image {} instead of {}",
                                                          to_string(weight.reference.kind()),
                                                          weight.reference.gradient_polytope().describe(),
                                                          polytope.describe()));
  grid.validate();
  if (grid.dim != polytope.dim())
    throw Error(ErrorCode::ValidationError,
                fmt::format("grid dimension {} does not match polytope dimension {}", grid.dim, polytope.dim()));

  Model model;
  model.polytope_ = polytope;
  model.sub_ = sub;
  model.weight_ = weight;
  model.weight_.halfwidth = grid.halfwidth;
  model.grid_ = grid;

  model.restricted_.reference = restricted_reference(sub, weight.reference);
  model.restricted_.perturbation = weight.perturbation.pulled_back(sub);
  model.restricted_.halfwidth = grid.halfwidth;
  model.z_grid_ = sub.kind == SubvarietyKind::Ambient ? grid : LogGrid::make(1, grid.n_per_axis, grid.halfwidth);

  model.samples_ = sample(model.weight_, grid);
  model.z_samples_ = sample(model.restricted_, model.z_grid_);
  for (double v : model.z_samples_)
    if (!std::isfinite(v))
      throw Error(ErrorCode::IncompatibleSubvariety, "weight perturbation is not finite on the subvariety " +
                                                         to_string(sub.kind));
  model.curvature_ = curvature_field(model.weight_, grid);
  return model;
}

Space Model::space(bool on_z) const {
  if (on_z) return Space{restricted_, sub_.restricted_polytope(), z_grid_, p()};
  return Space{weight_, polytope_, grid_, polytope_.dim()};
}

Model Model::with_perturbation(const Perturbation& g) const {
  WeightSymbol w = weight_;
  w.perturbation = g;
  return build_model(polytope_, sub_, w, grid_);
}

Model Model::with_grid(const LogGrid& grid) const { return build_model(polytope_, sub_, weight_, grid); }

}  // namespace rbk
