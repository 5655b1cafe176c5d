#pragma once

// Abstract simplicial complexes on integer labels: closure, Euler
// characteristic, vertex links and orientation of closed triangulated surfaces.

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <set>
#include <vector>

namespace ballpoly {

using Simplex = std::vector<int>;  // sorted labels

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Smallest complex containing the given simplices.
  static SimplicialComplex generated_by(const std::vector<Simplex>& generators) {
    SimplicialComplex k;
    for (auto g : generators) {
      std::sort(g.begin(), g.end());
      k.add_with_faces(g);
    }
    return k;
  }

  void add_with_faces(const Simplex& s) {
    const std::size_t n = s.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) face.push_back(s[i]);
      simplices_.insert(face);
    }
  }

  const std::set<Simplex>& simplices() const { return simplices_; }
  bool contains(const Simplex& s) const { return simplices_.count(s) > 0; }

  int dimension() const {
    int d = -1;
    for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
  }

  std::vector<Simplex> of_dimension(int d) const {
    std::vector<Simplex> out;
    for (const auto& s : simplices_)
      if (static_cast<int>(s.size()) == d + 1) out.push_back(s);
    return out;
  }

  std::array<std::size_t, 3> f_vector() const {
    return {of_dimension(0).size(), of_dimension(1).size(), of_dimension(2).size()};
  }

  long euler_characteristic() const {
    long chi = 0;
    for (const auto& s : simplices_) chi += (s.size() % 2 == 1) ? 1 : -1;
    return chi;
  }

  /// Every edge lies in some triangle.
  bool edge_property() const {
    const auto tris = of_dimension(2);
    for (const auto& e : of_dimension(1)) {
      const bool covered = std::any_of(tris.begin(), tris.end(), [&](const Simplex& t) {
        return std::includes(t.begin(), t.end(), e.begin(), e.end());
      });
      if (!covered) return false;
    }
    return true;
  }

  bool operator==(const SimplicialComplex& o) const { return simplices_ == o.simplices_; }

 private:
  std::set<Simplex> simplices_;
};

struct SphereCheck {
  bool closed = false;           // every edge in exactly two triangles
  bool links_are_cycles = false;  // every vertex link a single cycle
  bool orientable = false;
  long euler = 0;

  bool is_sphere() const { return closed && links_are_cycles && orientable && euler == 2; }
};

/// Combinatorial 2-sphere test on a pure 2-dimensional complex.
inline SphereCheck check_two_sphere(const SimplicialComplex& k) {
  SphereCheck r;
  r.euler = k.euler_characteristic();
  const auto tris = k.of_dimension(2);
  if (tris.empty() || k.dimension() != 2) return r;

  std::map<Simplex, std::vector<int>> edge_tris;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& s = tris[t];
    for (auto e : {Simplex{s[0], s[1]}, Simplex{s[0], s[2]}, Simplex{s[1], s[2]}})
      edge_tris[e].push_back(static_cast<int>(t));
  }
  r.closed = k.of_dimension(1).size() == edge_tris.size() &&
             std::all_of(edge_tris.begin(), edge_tris.end(), [](const auto& kv) { return kv.second.size() == 2; });

  r.links_are_cycles = true;
  for (const auto& vs : k.of_dimension(0)) {
    const int v = vs[0];
    std::map<int, std::vector<int>> adj;
    std::size_t link_edges = 0;
    for (const auto& s : tris) {
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      std::vector<int> other;
      for (int x : s)
        if (x != v) other.push_back(x);
      adj[other[0]].push_back(other[1]);
      adj[other[1]].push_back(other[0]);
      ++link_edges;
    }
    if (adj.empty() || link_edges != adj.size() ||
        !std::all_of(adj.begin(), adj.end(), [](const auto& kv) { return kv.second.size() == 2; })) {
      r.links_are_cycles = false;
      continue;
    }
    // connected
    std::set<int> seen{adj.begin()->first};
    std::queue<int> q;
    q.push(adj.begin()->first);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : adj[x])
        if (seen.insert(y).second) q.push(y);
    }
    if (seen.size() != adj.size()) r.links_are_cycles = false;
  }

  if (!r.closed) return r;
  // Propagate an orientation across shared edges; a conflict means
  // non-orientable.
  std::vector<std::array<int, 3>> oriented(tris.size());
  std::vector<bool> done(tris.size(), false);
  auto has_directed = [](const std::array<int, 3>& t, int a, int b) {
    for (int i = 0; i < 3; ++i)
      if (t[static_cast<std::size_t>(i)] == a && t[static_cast<std::size_t>((i + 1) % 3)] == b) return true;
    return false;
  };
  r.orientable = true;
  for (std::size_t seed = 0; seed < tris.size(); ++seed) {
    if (done[seed]) continue;
    oriented[seed] = {tris[seed][0], tris[seed][1], tris[seed][2]};
    done[seed] = true;
    std::queue<std::size_t> q;
    q.push(seed);
    while (!q.empty()) {
      const std::size_t t = q.front();
      q.pop();
      const auto& o = oriented[t];
      for (int i = 0; i < 3; ++i) {
        const int a = o[static_cast<std::size_t>(i)], b = o[static_cast<std::size_t>((i + 1) % 3)];
        const Simplex e{std::min(a, b), std::max(a, b)};
        for (int u : edge_tris[e]) {
          const auto uu = static_cast<std::size_t>(u);
          if (uu == t) continue;
          if (!done[uu]) {
            const auto& s = tris[uu];
            std::array<int, 3> cand{s[0], s[1], s[2]};
            if (has_directed(cand, a, b)) cand = {s[0], s[2], s[1]};
            oriented[uu] = cand;
            done[uu] = true;
            q.push(uu);
          } else if (has_directed(oriented[uu], a, b)) {
            r.orientable = false;
          }
        }
      }
    }
  }
  return r;
}

}  // namespace ballpoly
