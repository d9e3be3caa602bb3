#pragma once

// Monomial bases of H^0(X, mL) and their restriction to Z.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rbk/geometry.hpp"

namespace rbk {

/// Lattice points of mP in lexicographic order.
struct LatticeBasis {
  int m = 1;
  MomentPolytope polytope = MomentPolytope::interval(1);
  std::vector<Exponent> exponents;

  std::size_t size() const { return exponents.size(); }
};

/// Monomial restriction z^alpha -> w^target on Z.
struct RestrictionMap {
  LatticeBasis source;
  SubvarietyKind kind = SubvarietyKind::Ambient;
  /// Distinct image exponents, increasing. For Ambient these are the source exponents.
  std::vector<Exponent> target_exponents;
  /// Target index for every source exponent, or -1 if the monomial vanishes on Z.
  std::vector<int> incidence;
  /// Preimage list of each target exponent.
  std::vector<std::vector<int>> fibers;

  std::size_t image_dims() const { return target_exponents.size(); }

  /// Dense 0/1 matrix, image_dims x source size.
  Eigen::MatrixXd matrix() const;

  /// Numerical rank of matrix().
  std::size_t rank() const;
};

struct DimensionRow {
  int m = 0;
  std::size_t ambient_dim = 0;
  std::size_t image_dim = 0;
};

/// Throws Overflow when the count exceeds 10^7.
LatticeBasis section_basis(const MomentPolytope& polytope, int m);

RestrictionMap restriction_map(const LatticeBasis& basis, const SubvarietyDescriptor& sub);

std::vector<DimensionRow> dimension_sweep(const MomentPolytope& polytope, const SubvarietyDescriptor& sub,
                                          const std::vector<int>& m_list);

/// Number of lattice points of m Q, Q the restricted polytope of sub.
std::size_t restricted_lattice_count(const SubvarietyDescriptor& sub, int m);

}  // namespace rbk
