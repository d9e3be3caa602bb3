#include "rbk/exact/hull.hpp"

#include <algorithm>
#include <random>

#include "rbk/error.hpp"
#include "rbk/exact/predicates.hpp"

namespace rbk::exact {

std::vector<std::size_t> lower_hull_1d(const std::vector<double>& z) {
  std::vector<std::size_t> h;
  h.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      const std::array<std::int64_t, 3> x{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                          static_cast<std::int64_t>(i)};
      if (orient2(x, {z[a], z[b], z[i]}) > 0) break;
      h.pop_back();
    }
    h.push_back(i);
  }
  return h;
}

namespace {

struct Facet {
  std::array<int, 3> v{};
  std::array<int, 3> nbr{-1, -1, -1};
  bool alive = true;
  std::vector<int> outside;
};

class IncrementalHull {
 public:
  IncrementalHull(int n, const std::vector<double>& z) : n_(n) {
    pts_.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
      pts_[i] = {static_cast<std::int64_t>(i / n), static_cast<std::int64_t>(i % n), z[i]};
    conflict_.assign(pts_.size(), -1);
    start_of_.assign(pts_.size(), -1);
    end_of_.assign(pts_.size(), -1);
  }

  // Returns false when every point is coplanar.
  bool build(std::uint64_t seed) {
    const int a = 0, b = (n_ - 1) * n_, c = n_ - 1;
    int d = -1;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
      if (orient3(pts_[a], pts_[b], pts_[c], pts_[i]) != 0) {
        d = i;
        break;
      }
    if (d < 0) return false;
    init_tetrahedron({a, b, c, d});

    std::vector<int> order(pts_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (int p : order)
      if (conflict_[p] >= 0) insert(p);
    return true;
  }

  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<LiftedPoint>& points() const { return pts_; }

 private:
  bool visible(int f, int p) const {
    const auto& v = facets_[f].v;
    return orient3(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[p]) > 0;
  }

  void assign(int p, const std::vector<int>& candidates) {
    for (int f : candidates)
      if (facets_[f].alive && visible(f, p)) {
        conflict_[p] = f;
        facets_[f].outside.push_back(p);
        return;
      }
    conflict_[p] = -1;
  }

  void init_tetrahedron(const std::array<int, 4>& q) {
    const int faces[4][4] = {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}};
    for (const auto& f : faces) {
      Facet facet;
      facet.v = {q[f[0]], q[f[1]], q[f[2]]};
      if (orient3(pts_[facet.v[0]], pts_[facet.v[1]], pts_[facet.v[2]], pts_[q[f[3]]]) > 0)
        std::swap(facet.v[1], facet.v[2]);
      facets_.push_back(facet);
    }
    for (int f = 0; f < 4; ++f)
      for (int e = 0; e < 3; ++e) {
        const int u = facets_[f].v[e], w = facets_[f].v[(e + 1) % 3];
        for (int g = 0; g < 4; ++g)
          for (int k = 0; k < 3; ++k)
            if (facets_[g].v[k] == w && facets_[g].v[(k + 1) % 3] == u) facets_[f].nbr[e] = g;
      }
    const std::vector<int> all{0, 1, 2, 3};
    for (int p = 0; p < static_cast<int>(pts_.size()); ++p)
      if (p != q[0] && p != q[1] && p != q[2] && p != q[3]) assign(p, all);
  }

  void insert(int p) {
    ++stamp_;
    std::vector<int> vis;
    std::vector<int> stack{conflict_[p]};
    mark(conflict_[p], true);
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      vis.push_back(f);
      for (int g : facets_[f].nbr) {
        if (seen_[g] == stamp_) continue;
        const bool v = visible(g, p);
        mark(g, v);
        if (v) stack.push_back(g);
      }
    }

    // Cone from p over the horizon; orientation of each horizon edge is kept.
    std::vector<int> created, horizon_out;
    for (int f : vis)
      for (int e = 0; e < 3; ++e) {
        const int g = facets_[f].nbr[e];
        if (vis_[g]) continue;
        const int u = facets_[f].v[e], w = facets_[f].v[(e + 1) % 3];
        const int nf = static_cast<int>(facets_.size());
        Facet facet;
        facet.v = {u, w, p};
        facet.nbr[0] = g;
        for (int& back : facets_[g].nbr)
          if (back == f) back = nf;
        facets_.push_back(std::move(facet));
        seen_.push_back(0);
        vis_.push_back(false);
        start_of_[u] = nf;
        end_of_[w] = nf;
        created.push_back(nf);
        horizon_out.push_back(g);
      }
    if (created.empty()) throw Error(ErrorCode::HullDegenerate, "empty horizon during hull insertion");
    for (int nf : created) {
      Facet& facet = facets_[nf];
      facet.nbr[1] = start_of_[facet.v[1]];
      facet.nbr[2] = end_of_[facet.v[0]];
    }

    std::vector<int> orphans;
    for (int f : vis) {
      Facet& facet = facets_[f];
      facet.alive = false;
      for (int q : facet.outside)
        if (q != p) orphans.push_back(q);
      std::vector<int>().swap(facet.outside);
    }
    conflict_[p] = -1;
    // A point that saw a removed facet is either above a new facet, above an
    // old facet across the horizon, or inside.
    std::sort(horizon_out.begin(), horizon_out.end());
    horizon_out.erase(std::unique(horizon_out.begin(), horizon_out.end()), horizon_out.end());
    std::vector<int> candidates = created;
    candidates.insert(candidates.end(), horizon_out.begin(), horizon_out.end());
    for (int q : orphans) assign(q, candidates);
  }

  void mark(int f, bool v) {
    if (seen_.size() < facets_.size()) {
      seen_.resize(facets_.size(), 0);
      vis_.resize(facets_.size(), false);
    }
    seen_[f] = stamp_;
    vis_[f] = v;
  }

  int n_;
  std::vector<LiftedPoint> pts_;
  std::vector<Facet> facets_;
  std::vector<int> conflict_;
  std::vector<int> start_of_, end_of_;
  std::vector<int> seen_;
  std::vector<bool> vis_;
  int stamp_ = 0;
};

void fill_neighbours(LowerHull2D& h) {
  h.is_vertex.assign(static_cast<std::size_t>(h.n) * h.n, false);
  h.neighbours.assign(h.is_vertex.size(), {});
  for (const auto& f : h.facets)
    for (int e = 0; e < 3; ++e) {
      const std::size_t u = f[e], w = f[(e + 1) % 3];
      h.is_vertex[u] = true;
      h.neighbours[u].push_back(w);
      h.neighbours[w].push_back(u);
    }
  for (auto& nb : h.neighbours) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

}  // namespace

LowerHull2D lower_hull_2d(int n, const std::vector<double>& z, std::uint64_t seed) {
  if (n < 2 || z.size() != static_cast<std::size_t>(n) * n)
    throw Error(ErrorCode::HullDegenerate, "lower_hull_2d needs an n x n grid with n >= 2");
  LowerHull2D out;
  out.n = n;
  IncrementalHull hull(n, z);
  if (!hull.build(seed)) {
    // Affine data: the two corner triangles span the whole plane.
    const std::size_t A = 0, B = static_cast<std::size_t>(n - 1) * n, C = B + n - 1, D = n - 1;
    out.facets = {{A, B, C}, {A, C, D}};
  } else {
    const auto& P = hull.points();
    for (const Facet& f : hull.facets()) {
      if (!f.alive) continue;
      if (orient_xy(P[f.v[0]], P[f.v[1]], P[f.v[2]]) >= 0) continue;
      out.facets.push_back({static_cast<std::size_t>(f.v[0]), static_cast<std::size_t>(f.v[2]),
                            static_cast<std::size_t>(f.v[1])});
    }
  }
  fill_neighbours(out);
  return out;
}

std::vector<bool> brute_force_lower_vertices(int n, const std::vector<double>& z) {
  const int N = n * n;
  std::vector<LiftedPoint> P(N);
  for (int i = 0; i < N; ++i) P[i] = {i / n, i % n, z[i]};
  std::vector<bool> vertex(N, true);
  for (int i = 0; i < N; ++i) {
    bool covered = false;
    for (int a = 0; a < N && !covered; ++a)
      for (int b = a + 1; b < N && !covered; ++b)
        for (int c = b + 1; c < N && !covered; ++c) {
          if (a == i || b == i || c == i) continue;
          int o = orient_xy(P[a], P[b], P[c]);
          if (o == 0) continue;
          const LiftedPoint& A = P[a];
          const LiftedPoint& B = o > 0 ? P[b] : P[c];
          const LiftedPoint& C = o > 0 ? P[c] : P[b];
          if (orient_xy(A, B, P[i]) < 0 || orient_xy(B, C, P[i]) < 0 || orient_xy(C, A, P[i]) < 0) continue;
          if (orient3(A, B, C, P[i]) >= 0) covered = true;
        }
    vertex[i] = !covered;
  }
  return vertex;
}

}  // namespace rbk::exact
