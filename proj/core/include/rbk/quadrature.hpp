#pragma once

// Composite Gauss-Legendre rules for the reference measure of a symbol.
//
// The reference measure p! det(Hess u0) dt is the pullback of p! dx under the
// gradient map x = grad u0(t), so every integral against it is computed in
// moment coordinates over the polytope. The integrands exp(<k,t> - m u) are
// then smooth up to the boundary and no truncation of the log domain occurs.

#include <string>
#include <vector>

#include "rbk/geometry.hpp"

namespace rbk {

struct QuadratureRule {
  /// Nodes in log coordinates (second entry unused in one dimension).
  std::vector<Point> nodes;
  /// Weights of the reference measure, including the p! factor.
  std::vector<double> weights;
  std::string tag;

  std::size_t size() const { return nodes.size(); }
};

struct QuadratureOptions {
  int panels_1d = 64;
  int panels_2d = 12;
  /// Gauss-Legendre points per panel: 16 or 20.
  int order = 16;

  /// A rule with different nodes and twice the panels, for independent checks.
  QuadratureOptions refined() const { return {2 * panels_1d, 2 * panels_2d, 20}; }
  /// A rule with different nodes only.
  QuadratureOptions alternate() const { return {panels_1d, panels_2d, 20}; }
};

/// Composite rule for the reference measure of ref over its gradient polytope.
QuadratureRule reference_rule(const ReferenceSymbol& ref, const QuadratureOptions& options = {});

/// Nodes and weights of an order-point Gauss-Legendre rule on [0, 1].
void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace rbk
