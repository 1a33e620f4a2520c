#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ccx/automorphism.hpp"
#include "ccx/complex.hpp"

namespace ccx {

struct SeparationFailure : Error {
  SeparationFailure(std::uint32_t wall, std::size_t components)
      : Error("wall " + std::to_string(wall) + " does not separate: " +
              std::to_string(components) + " component(s)"),
        wall_id(wall),
        component_count(components) {}
  std::uint32_t wall_id;
  std::size_t component_count;
};

struct AmbiguousDualEdge : Error {
  using Error::Error;
};

/// A wall: one parallelism class of edges. Edge indices refer to
/// CubeComplex::edges() and are sorted.
struct Wall {
  std::uint32_t id = 0;
  std::vector<std::uint32_t> edges;
};

/// All walls of a complex plus the edge -> wall lookup.
struct WallSet {
  std::vector<Wall> walls;
  std::vector<std::uint32_t> wall_of_edge;  // indexed by edge index

  std::uint32_t wall_of(const CubeComplex& x, VertexId u, VertexId v) const {
    auto e = x.edge_index(u, v);
    if (!e) throw DomainError("no edge {" + x.token(u) + ", " + x.token(v) + "}");
    return wall_of_edge[*e];
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Partition the edge set into walls: the closure of the elementary-parallel
/// relation (opposite edges of each square).
inline WallSet walls(const CubeComplex& x) {
  const auto& edges = x.edges();
  detail::UnionFind uf(edges.size());
  auto eidx = [&](VertexId u, VertexId v) { return *x.edge_index(u, v); };
  for (const auto& c : x.cubes()) {
    if (c.dim() != 2) continue;
    const auto& q = c.corners;
    uf.unite(eidx(q[0], q[1]), eidx(q[2], q[3]));
    uf.unite(eidx(q[0], q[2]), eidx(q[1], q[3]));
  }
  // Classes keyed by least edge index, then numbered in that order.
  std::vector<std::uint32_t> least(edges.size(), 0xffffffffu);
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    std::uint32_t r = uf.find(e);
    least[r] = std::min(least[r], e);
  }
  std::vector<std::uint32_t> reps;
  for (std::uint32_t e = 0; e < edges.size(); ++e)
    if (uf.find(e) == e) reps.push_back(least[e]);
  std::sort(reps.begin(), reps.end());

  WallSet ws;
  ws.wall_of_edge.assign(edges.size(), 0);
  ws.walls.resize(reps.size());
  for (std::uint32_t w = 0; w < reps.size(); ++w) ws.walls[w].id = w;
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    std::uint32_t rep_least = least[uf.find(e)];
    std::uint32_t w = static_cast<std::uint32_t>(
        std::lower_bound(reps.begin(), reps.end(), rep_least) - reps.begin());
    ws.wall_of_edge[e] = w;
    ws.walls[w].edges.push_back(e);
  }
  return ws;
}

/// The two vertex sides of a wall. side0 contains the lexicographically
/// least vertex of the complex.
struct HalfspacePair {
  std::uint32_t wall_id = 0;
  std::vector<bool> side;  // side[v] = false for side0, true for side1
  std::vector<VertexId> side0, side1;

  bool separates(VertexId u, VertexId v) const { return side[u] != side[v]; }
};

/// Delete the wall's edges from the 1-skeleton and read off the two
/// components. Throws SeparationFailure when the count is not two, which
/// signals that the input was not actually a cubing.
inline HalfspacePair halfspaces(const CubeComplex& x, const WallSet& ws, const Wall& w) {
  const std::size_t n = x.vertex_count();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    const int id = ncomp++;
    std::vector<VertexId> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId v : x.adjacency()[u]) {
        if (comp[v] != -1) continue;
        if (ws.wall_of(x, u, v) == w.id) continue;
        comp[v] = id;
        stack.push_back(v);
      }
    }
  }
  if (ncomp != 2) throw SeparationFailure(w.id, static_cast<std::size_t>(ncomp));
  HalfspacePair hp;
  hp.wall_id = w.id;
  hp.side.assign(n, false);
  const int side0 = comp[0];
  for (VertexId v = 0; v < n; ++v) {
    hp.side[v] = comp[v] != side0;
    (hp.side[v] ? hp.side1 : hp.side0).push_back(v);
  }
  // Sanity: exactly the wall's edges cross sides.
  for (std::uint32_t e = 0; e < x.edges().size(); ++e) {
    const auto [u, v] = x.edges()[e];
    const bool crosses = hp.side[u] != hp.side[v];
    if (crosses != (ws.wall_of_edge[e] == w.id))
      throw SeparationFailure(w.id, 2);
  }
  return hp;
}

inline bool separates(const HalfspacePair& hp, VertexId u, VertexId v) {
  return hp.separates(u, v);
}

/// Number of walls separating u from v. Together with BFS distance this is
/// the two-route identity the tests pin down.
inline std::size_t separating_wall_count(const CubeComplex& x, const WallSet& ws, VertexId u,
                                         VertexId v) {
  std::size_t count = 0;
  for (const auto& w : ws.walls) {
    HalfspacePair hp = halfspaces(x, ws, w);
    if (hp.separates(u, v)) ++count;
  }
  return count;
}

/// Carrier of a wall: the subcomplex of all cubes dual to it, face-closed.
/// Construction never throws; defects (a vertex on two dual edges) are
/// recorded and surface as AmbiguousDualEdge when the reflection is asked
/// for. The subcomplex is held behind a shared_ptr so reflections can
/// outlive the Carrier value.
struct Carrier {
  std::uint32_t wall_id = 0;
  std::shared_ptr<const CubeComplex> complex;
  std::vector<std::string> vertices;      // tokens, sorted
  std::vector<std::string> dual_partner;  // unique dual neighbor, parallel to vertices
  std::vector<std::string> ambiguous;     // vertices on more than one dual edge
};

inline Carrier carrier(const CubeComplex& x, const WallSet& ws, const Wall& w) {
  std::vector<std::size_t> dual;
  for (std::size_t c = 0; c < x.cubes().size(); ++c) {
    const Cube& q = x.cubes()[c];
    if (q.dim() == 0) continue;
    bool is_dual = false;
    for (std::uint32_t axis = 0; axis < q.dim() && !is_dual; ++axis) {
      // All edges along one axis are elementary parallel, so one suffices.
      if (ws.wall_of(x, q.corners[0], q.corners[std::size_t{1} << axis]) == w.id) is_dual = true;
    }
    if (is_dual) dual.push_back(c);
  }

  Carrier car;
  car.wall_id = w.id;
  car.complex = std::make_shared<CubeComplex>(x.subcomplex(dual));

  std::vector<std::vector<VertexId>> dual_neighbors(x.vertex_count());
  for (std::uint32_t e : w.edges) {
    const auto [u, v] = x.edges()[e];
    dual_neighbors[u].push_back(v);
    dual_neighbors[v].push_back(u);
  }
  for (const auto& t : car.complex->tokens()) {
    VertexId v = x.require_vertex(t);
    const auto& dn = dual_neighbors[v];
    car.vertices.push_back(t);
    car.dual_partner.push_back(dn.size() == 1 ? x.token(dn[0]) : "");
    if (dn.size() != 1) car.ambiguous.push_back(t);
  }
  return car;
}

/// The carrier reflection: the involution swapping the endpoints of every
/// dual edge, as an automorphism of the carrier subcomplex. Defined only on
/// the carrier; no extension to the rest of the complex is attempted.
inline Automorphism reflection(const Carrier& car) {
  if (!car.ambiguous.empty())
    throw AmbiguousDualEdge("vertex " + car.ambiguous.front() +
                            " does not lie on a unique edge dual to wall " +
                            std::to_string(car.wall_id));
  std::vector<std::pair<std::string, std::string>> map;
  for (std::size_t i = 0; i < car.vertices.size(); ++i)
    map.push_back({car.vertices[i], car.dual_partner[i]});
  Automorphism sigma = Automorphism::from_token_map(car.complex, map);
  if (!sigma.compose(sigma).is_identity())
    throw AmbiguousDualEdge("carrier reflection of wall " + std::to_string(car.wall_id) +
                            " is not an involution");
  return sigma;
}

inline Automorphism reflection(const CubeComplex& x, const WallSet& ws, const Wall& w) {
  return reflection(carrier(x, ws, w));
}

}  // namespace ccx
