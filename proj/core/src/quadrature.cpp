#include "rbk/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

namespace {

template <int N>
void unit_rule(std::vector<double>& x, std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& a = rule::abscissa();
  const auto& v = rule::weights();
  x.clear();
  w.clear();
  // Boost stores the nonnegative half; mirror it onto [-1, 1] then map to [0, 1].
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0.0) continue;
    x.push_back(0.5 * (1.0 - a[i]));
    w.push_back(0.5 * v[i]);
  }
  if (a[0] == 0.0) {
    x.push_back(0.5);
    w.push_back(0.5 * v[0]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    x.push_back(0.5 * (1.0 + a[i]));
    w.push_back(0.5 * v[i]);
  }
}

// Composite nodes on [0, len].
void composite(int order, int panels, double len, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> ux, uw;
  gauss_legendre_unit(order, ux, uw);
  x.clear();
  w.clear();
  const double step = len / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < ux.size(); ++q) {
      x.push_back(step * (p + ux[q]));
      w.push_back(step * uw[q]);
    }
}

}  // namespace

void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  switch (order) {
    case 16: unit_rule<16>(nodes, weights); return;
    case 20: unit_rule<20>(nodes, weights); return;
    default: throw Error(ErrorCode::ValidationError, fmt::format("unsupported Gauss-Legendre order {}", order));
  }
}

QuadratureRule reference_rule(const ReferenceSymbol& ref, const QuadratureOptions& opt) {
  QuadratureRule rule;
  std::vector<double> x0, w0, x1, w1;
  switch (ref.kind()) {
    case ReferenceKind::FubiniStudy:
    case ReferenceKind::Logistic: {
      composite(opt.order, opt.panels_1d, ref.scale_a(), x0, w0);
      for (std::size_t i = 0; i < x0.size(); ++i) {
        rule.nodes.push_back(ref.from_moment(Point(x0[i], 0.0)));
        rule.weights.push_back(w0[i]);
      }
      break;
    }
    case ReferenceKind::Product: {
      composite(opt.order, opt.panels_2d, ref.scale_a(), x0, w0);
      composite(opt.order, opt.panels_2d, ref.scale_b(), x1, w1);
      for (std::size_t i = 0; i < x0.size(); ++i)
        for (std::size_t j = 0; j < x1.size(); ++j) {
          rule.nodes.push_back(ref.from_moment(Point(x0[i], x1[j])));
          rule.weights.push_back(2.0 * w0[i] * w1[j]);
        }
      break;
    }
    case ReferenceKind::Simplex: {
      // Collapsed square: x0 = a s, x1 = a (1 - s) r, dx = a^2 (1 - s) ds dr.
      const double a = ref.scale_a();
      composite(opt.order, opt.panels_2d, 1.0, x0, w0);
      for (std::size_t i = 0; i < x0.size(); ++i)
        for (std::size_t j = 0; j < x0.size(); ++j) {
          const double s = x0[i], r = x0[j];
          rule.nodes.push_back(ref.from_moment(Point(a * s, a * (1.0 - s) * r)));
          rule.weights.push_back(2.0 * a * a * (1.0 - s) * w0[i] * w0[j]);
        }
      break;
    }
  }
  rule.tag = fmt::format("gauss-legendre-{}x{}-{}", opt.order, ref.dim() == 1 ? opt.panels_1d : opt.panels_2d,
                         to_string(ref.kind()));
  return rule;
}

}  // namespace rbk
