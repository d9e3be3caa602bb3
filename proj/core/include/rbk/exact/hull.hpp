#pragma once

// Lower convex hulls of lifted grid data.
//
// Points sit at integer grid positions with double heights; all combinatorial
// decisions go through the exact predicates, so the output depends only on
// the input values (and, in two dimensions, on the fixed insertion seed).

#include <array>
#include <cstdint>
#include <vector>

namespace rbk::exact {

/// Indices of the lower hull vertices of {(i, z[i])}, increasing in i.
/// Points collinear with a hull edge are not vertices.
std::vector<std::size_t> lower_hull_1d(const std::vector<double>& z);

struct LowerHull2D {
  int n = 0;
  /// Lower facets as flat indices (i0 * n + i1), counter-clockwise in the grid plane.
  std::vector<std::array<std::size_t, 3>> facets;
  /// Whether each grid point is a vertex of some lower facet.
  std::vector<bool> is_vertex;
  /// Lower-hull neighbours of each vertex, sorted.
  std::vector<std::vector<std::size_t>> neighbours;
};

/// Lower hull of {(i0, i1, z[i0 * n + i1])} on an n x n grid, built by
/// randomized incremental insertion with conflict lists.
LowerHull2D lower_hull_2d(int n, const std::vector<double>& z, std::uint64_t seed = 0x5eedULL);

/// Reference O(N^4) lower hull for small inputs: a triangle is a lower facet
/// iff no point lies strictly below its plane. Returns sorted vertex flags.
std::vector<bool> brute_force_lower_vertices(int n, const std::vector<double>& z);

}  // namespace rbk::exact
