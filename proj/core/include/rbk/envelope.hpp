#pragma once

// Slope-constrained convex envelopes of sampled symbols.
//
// For samples u_k at grid points t_k and a polytope Q, the envelope is
//   Pu(t) = sup_{xi in Q} ( <xi, t> - u*(xi) ),   u*(xi) = max_k <xi, t_k> - u_k,
// the largest convex function below the samples whose slopes stay in Q. It is
// computed exactly from the lower hull of the lifted samples: the concave
// function xi -> <xi, t> - u*(xi) attains its maximum over Q at a facet
// gradient inside Q or at a breakpoint of u* on the boundary of Q.

#include <optional>
#include <vector>

#include "rbk/exact/hull.hpp"
#include "rbk/geometry.hpp"
#include "rbk/sections.hpp"

namespace rbk {

/// Affine minorant xi -> <xi, t> - conjugate; value at t is <gradient, t> - conjugate.
struct SupportPlane {
  Point gradient = Point::Zero();
  double conjugate = 0.0;
};

struct EnvelopeGrid {
  LogGrid grid;
  MomentPolytope polytope = MomentPolytope::interval(1);
  int p = 1;
  std::vector<double> samples;
  std::vector<double> values;
  /// Discrete gradient of the envelope (central differences, one-sided at the edges).
  std::vector<Point> slopes;
  /// Dual vertices: every supporting plane that attains the envelope somewhere.
  std::vector<SupportPlane> planes;

  /// Lower hull of the samples: vertex indices (1D) or facets (2D).
  std::vector<std::size_t> hull_1d;
  exact::LowerHull2D hull_2d;

  /// Envelope value at an arbitrary point; coordinates may be -infinity.
  double evaluate(const Point& t) const;
};

struct ContactSet {
  std::vector<bool> mask;
  /// Per-point tolerance used for the mask.
  std::vector<double> epsilon;
  std::size_t count = 0;

  /// Mask points whose grid neighbours are all in the mask.
  std::vector<bool> interior(const LogGrid& grid) const;
};

struct RegularityProbe {
  double max_abs_second_difference = 0.0;
  std::size_t index = 0;
  Point location = Point::Zero();
};

struct ConvergenceRow {
  int m = 0;
  double sup_distance = 0.0;
  Point location = Point::Zero();
};

/// Envelope of arbitrary samples on a grid under the slope constraint polytope.
EnvelopeGrid envelope_of(const std::vector<double>& samples, const LogGrid& grid, const MomentPolytope& polytope);

/// Restricted (on_z) or ambient envelope of the model's weight.
EnvelopeGrid equilibrium_envelope(const Model& model, bool on_z);

/// The ambient envelope pulled back to Z, sampled on the Z grid.
std::vector<double> pullback_to_z(const EnvelopeGrid& ambient, const Model& model);

/// Contact mask |Pu - u| <= 1e-10 (1 + |u|).
ContactSet contact_set(const EnvelopeGrid& env);

/// Largest absolute discrete second difference of the envelope over interior points.
RegularityProbe regularity_probe(const EnvelopeGrid& env);

/// sup over the inner half-grid of |u_m - Pu| for each m (restricted envelope on Z).
std::vector<ConvergenceRow> bergman_iteration_limit(const Model& model, const EnvelopeGrid& env,
                                                    const std::vector<int>& m_list);

/// Maximum of |a - b| over the inner half-grid, with its location.
ConvergenceRow inner_sup_distance(const LogGrid& grid, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rbk
