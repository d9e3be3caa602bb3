#include "rbk/sections.hpp"

#include <algorithm>
#include <map>

#include <Eigen/LU>
#include <fmt/format.h>

#include "rbk/error.hpp"

namespace rbk {

namespace {

constexpr std::size_t kMaxBasis = 10'000'000;

// floor(m * r) for a positive rational r
std::int64_t scaled_floor(const Rational& r, int m) { return (m * r.numerator()) / r.denominator(); }

}  // namespace

LatticeBasis section_basis(const MomentPolytope& polytope, int m) {
  if (m < 1) throw Error(ErrorCode::ValidationError, "m >= 1 required");
  LatticeBasis basis;
  basis.m = m;
  basis.polytope = polytope;
  const std::int64_t n0 = scaled_floor(polytope.a(), m);
  const std::int64_t n1 = polytope.dim() == 1 ? 0 : scaled_floor(polytope.kind() == PolytopeKind::Rectangle ? polytope.b() : polytope.a(), m);
  const double estimate = static_cast<double>(n0 + 1) * static_cast<double>(n1 + 1);
  if (estimate > 2.0 * kMaxBasis)
    throw Error(ErrorCode::Overflow, fmt::format("lattice count of {}P exceeds 1e7", m));
  for (std::int64_t i = 0; i <= n0; ++i)
    for (std::int64_t j = 0; j <= n1; ++j) {
      const Exponent alpha{i, j};
      if (polytope.contains(alpha, m)) basis.exponents.push_back(alpha);
    }
  if (basis.exponents.size() > kMaxBasis)
    throw Error(ErrorCode::Overflow, fmt::format("lattice count of {}P exceeds 1e7", m));
  return basis;
}

RestrictionMap restriction_map(const LatticeBasis& basis, const SubvarietyDescriptor& sub) {
  RestrictionMap map;
  map.source = basis;
  map.kind = sub.kind;
  map.incidence.assign(basis.size(), -1);

  if (sub.kind == SubvarietyKind::Ambient) {
    map.target_exponents = basis.exponents;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      map.incidence[i] = static_cast<int>(i);
      map.fibers.push_back({static_cast<int>(i)});
    }
    return map;
  }

  // Curve targets are degrees in the line coordinate; -1 marks the kernel.
  auto degree = [&](const Exponent& a) -> std::int64_t {
    switch (sub.kind) {
      case SubvarietyKind::CoordinateCurve: return a[sub.axis] > 0 ? -1 : a[1 - sub.axis];
      case SubvarietyKind::DiagonalCurve:
      case SubvarietyKind::LineInP2: return a[0] + a[1];
      case SubvarietyKind::Ambient: break;
    }
    return -1;
  };
  std::map<std::int64_t, std::vector<int>> buckets;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::int64_t d = degree(basis.exponents[i]);
    if (d >= 0) buckets[d].push_back(static_cast<int>(i));
  }
  for (auto& [d, fiber] : buckets) {
    const int target = static_cast<int>(map.target_exponents.size());
    map.target_exponents.push_back({d, 0});
    for (int i : fiber) map.incidence[i] = target;
    map.fibers.push_back(std::move(fiber));
  }
  return map;
}

Eigen::MatrixXd RestrictionMap::matrix() const {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(image_dims()), static_cast<Eigen::Index>(source.size()));
  for (std::size_t i = 0; i < incidence.size(); ++i)
    if (incidence[i] >= 0) R(incidence[i], static_cast<Eigen::Index>(i)) = 1.0;
  return R;
}

std::size_t RestrictionMap::rank() const {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix());
  return static_cast<std::size_t>(lu.rank());
}

std::vector<DimensionRow> dimension_sweep(const MomentPolytope& polytope, const SubvarietyDescriptor& sub_in,
                                          const std::vector<int>& m_list) {
  if (m_list.empty()) throw Error(ErrorCode::ValidationError, "m_list must be nonempty");
  if (!std::is_sorted(m_list.begin(), m_list.end()) ||
      std::adjacent_find(m_list.begin(), m_list.end()) != m_list.end())
    throw Error(ErrorCode::ValidationError, "m_list must be strictly increasing");
  SubvarietyDescriptor sub = sub_in;
  sub.ambient = polytope;
  sub.validate();
  std::vector<DimensionRow> rows;
  for (int m : m_list) {
    const LatticeBasis basis = section_basis(polytope, m);
    const RestrictionMap map = restriction_map(basis, sub);
    rows.push_back({m, basis.size(), map.image_dims()});
  }
  return rows;
}

std::size_t restricted_lattice_count(const SubvarietyDescriptor& sub, int m) {
  const MomentPolytope Q = sub.restricted_polytope();
  if (Q.dim() == 1) return static_cast<std::size_t>(scaled_floor(Q.a(), m) + 1);
  return section_basis(Q, m).size();
}

}  // namespace rbk
