#pragma once

// Discrete Monge-Ampere measures.
//
// Envelope measures are Alexandrov measures computed from hull combinatorics:
// a hull vertex carries p! times the volume of its dual cell inside the
// slope polytope, so the total is p! vol(Q) up to rounding. Cells at the
// edge of the window carry the slopes beyond the window, which is where the
// recession of the symbol puts them.

#include <functional>
#include <vector>

#include "rbk/bergman.hpp"
#include "rbk/envelope.hpp"
#include "rbk/geometry.hpp"

namespace rbk {

struct DiscreteMeasure {
  LogGrid grid;
  std::vector<double> masses;
  double total = 0.0;
};

enum class SmoothMaMode {
  Analytic,  ///< closed-form Hessian at grid points
  Discrete,  ///< second differences of the samples
};

struct RepresentationResidual {
  double mass_off_contact = 0.0;
  double cellwise_gap = 0.0;
  std::size_t contact_interior = 0;
};

struct TestFunction {
  std::function<double(const Point&)> f;
  std::string name;
};

DiscreteMeasure monge_ampere_1d(const EnvelopeGrid& env);
DiscreteMeasure monge_ampere_2d(const EnvelopeGrid& env);
/// Dispatches on the envelope dimension.
DiscreteMeasure monge_ampere(const EnvelopeGrid& env);

/// p! det(Hess u) h^p where Hess u >= -10 h^2, else 0.
DiscreteMeasure smooth_ma(const WeightSymbol& symbol, const LogGrid& grid, SmoothMaMode mode = SmoothMaMode::Analytic);
DiscreteMeasure smooth_ma(const Model& model, bool on_z, SmoothMaMode mode = SmoothMaMode::Analytic);

/// Mass of MA(Pu) off the contact set and the largest cellwise gap to the
/// smooth measure on the contact interior.
RepresentationResidual representation_residual(const EnvelopeGrid& env, const WeightSymbol& symbol,
                                               SmoothMaMode mode = SmoothMaMode::Analytic);

/// Reference measure of a symbol's reference, as cell masses on a grid. One
/// dimension: exact cell integrals with the outer cells reaching infinity.
/// Two dimensions: midpoint rule.
DiscreteMeasure reference_cells(const WeightSymbol& symbol, const LogGrid& grid);

/// The constant 1 and five Gaussian bumps along the grid.
std::vector<TestFunction> shipped_test_functions(const LogGrid& grid);

/// |int chi (p!/m^p) B dmu - int chi dMA| for each test function.
std::vector<double> weak_compare(const KernelGrid& kernel, const DiscreteMeasure& dmu, const DiscreteMeasure& target,
                                 const std::vector<TestFunction>& tests, int p);

/// Total of the more singular measure does not exceed the less singular one
/// (within 1e-10); in the ample scope both carry full mass and equality is asserted.
bool mass_comparison_check(const DiscreteMeasure& less_singular, const DiscreteMeasure& more_singular);

double pairing(const DiscreteMeasure& mu, const TestFunction& chi);

}  // namespace rbk
