#pragma once

// Restricted volumes from dimension counts, envelopes and Bergman potentials.

#include <optional>
#include <string>
#include <vector>

#include "rbk/bergman.hpp"
#include "rbk/envelope.hpp"
#include "rbk/geometry.hpp"
#include "rbk/ma.hpp"
#include "rbk/sections.hpp"

namespace rbk {

struct VolumeFit {
  double value = 0.0;
  /// Set when an exact polynomial of degree p reproduces every count.
  std::optional<Rational> exact;
};

struct FundamentalProbe {
  double fitted_c = 1.0;
  int argmax_m = 0;
  Point argmax_location = Point::Zero();
};

struct MovingRow {
  int m = 0;
  double mass = 0.0;
};

struct InvarianceResult {
  double vol_a = 0.0;
  double vol_b = 0.0;
  double gap = 0.0;
};

struct VolumeReport {
  std::string scenario_id;
  int p = 1;
  std::vector<DimensionRow> dims;
  VolumeFit vol_from_dims;
  double vol_from_ma_restricted = 0.0;
  double vol_from_ma_ambient_pullback = 0.0;
  std::vector<MovingRow> moving;
  FundamentalProbe fundamental;
  double gap_dims_restricted = 0.0;
  double gap_dims_ambient = 0.0;
  double gap_restricted_ambient = 0.0;
  bool three_way_agreement = false;
};

/// Least-squares fit of image_dim = v m^p / p! + lower order. Errors:
/// InsufficientSweep (fewer than 3 values of m, or largest m below 32).
VolumeFit volume_from_dims(const std::vector<DimensionRow>& dims, int p);

/// Total Monge-Ampere mass of the slope-constrained hull of u_m on Z.
double moving_intersection(const Model& model, const RestrictionMap& rmap, int m);
double moving_intersection(const Model& model, const FsPotential& um);

/// Smallest C >= 1 with C^-1 e^{-m(u - Pu)} <= B <= C m^p e^{-m(u - Pu)} on the
/// inner half-grid, over all supplied kernels. Errors: Unbounded (C > 1e12).
FundamentalProbe fundamental_inequality_probe(const Model& model, const EnvelopeGrid& env,
                                              const std::vector<KernelGrid>& kernels);
/// Convenience overload computing the kernels for m_list.
FundamentalProbe fundamental_inequality_probe(const Model& model, const EnvelopeGrid& env,
                                              const std::vector<int>& m_list);

/// Restricted MA volumes of two models with the same geometry.
InvarianceResult invariance_check(const Model& a, const Model& b);

/// Restricted MA volume of a model: total mass of the restricted envelope.
double restricted_ma_volume(const Model& model);

/// Total mass of the ambient envelope pulled back to Z.
double ambient_pullback_volume(const Model& model);

/// Kernel on the Z grid for one m.
KernelGrid kernel_for(const Model& model, int m);

/// Full report for a model and sweep. The kernels computed on the way are
/// handed back through `kernels` when it is not null.
VolumeReport assemble_report(const std::string& id, const Model& model, const std::vector<int>& m_list,
                             std::vector<KernelGrid>* kernels = nullptr);

/// Relative gap |a - b| / max(|a|, |b|, tiny).
double relative_gap(double a, double b);

}  // namespace rbk
