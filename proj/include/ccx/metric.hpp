#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccx/complex.hpp"
#include "ccx/hyperplanes.hpp"

namespace ccx {

struct PathError : Error {
  using Error::Error;
};

/// A combinatorial path. Consecutive vertices are equal or joined by an edge;
/// normalize() collapses stutters so every step is an edge afterwards.
struct CombinatorialPath {
  std::vector<VertexId> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }

  static CombinatorialPath from_tokens(const CubeComplex& x,
                                       const std::vector<std::string>& tokens) {
    CombinatorialPath p;
    for (const auto& t : tokens) p.vertices.push_back(x.require_vertex(t));
    return p;
  }

  CombinatorialPath normalized() const {
    CombinatorialPath p;
    for (VertexId v : vertices)
      if (p.vertices.empty() || p.vertices.back() != v) p.vertices.push_back(v);
    return p;
  }

  bool is_stutter_free() const {
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (vertices[i] == vertices[i - 1]) return false;
    return true;
  }

  void require_edge_valid(const CubeComplex& x) const {
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (!x.edge_index(vertices[i - 1], vertices[i]))
        throw PathError("invalid step: no edge {" + x.token(vertices[i - 1]) + ", " +
                        x.token(vertices[i]) + "}");
  }
};

/// BFS distance in the 1-skeleton; nullopt when disconnected.
inline std::optional<std::size_t> distance_opt(const CubeComplex& x, VertexId u, VertexId v) {
  if (u == v) return 0;
  std::vector<std::uint32_t> d(x.vertex_count(), 0xffffffffu);
  std::deque<VertexId> q{u};
  d[u] = 0;
  while (!q.empty()) {
    VertexId a = q.front();
    q.pop_front();
    for (VertexId b : x.adjacency()[a]) {
      if (d[b] != 0xffffffffu) continue;
      d[b] = d[a] + 1;
      if (b == v) return d[b];
      q.push_back(b);
    }
  }
  return std::nullopt;
}

inline std::size_t distance(const CubeComplex& x, VertexId u, VertexId v) {
  auto d = distance_opt(x, u, v);
  if (!d)
    throw DomainError("vertices " + x.token(u) + " and " + x.token(v) +
                      " are in different components");
  return *d;
}

inline std::size_t distance(const CubeComplex& x, const std::string& u, const std::string& v) {
  return distance(x, x.require_vertex(u), x.require_vertex(v));
}

/// Distances from one source (0xffffffff where unreachable).
inline std::vector<std::uint32_t> distances_from(const CubeComplex& x, VertexId src) {
  std::vector<std::uint32_t> d(x.vertex_count(), 0xffffffffu);
  std::deque<VertexId> q{src};
  d[src] = 0;
  while (!q.empty()) {
    VertexId a = q.front();
    q.pop_front();
    for (VertexId b : x.adjacency()[a])
      if (d[b] == 0xffffffffu) {
        d[b] = d[a] + 1;
        q.push_back(b);
      }
  }
  return d;
}

/// Wall ids dual to the successive edges of a stutter-free path.
struct CrossingSequence {
  std::vector<std::uint32_t> walls;

  /// Index into `walls` of the first entry repeating an earlier one.
  std::optional<std::size_t> first_repeat() const {
    std::set<std::uint32_t> seen;
    for (std::size_t i = 0; i < walls.size(); ++i)
      if (!seen.insert(walls[i]).second) return i;
    return std::nullopt;
  }

  bool duplicate_free() const { return !first_repeat().has_value(); }
};

inline CrossingSequence crossing_sequence(const CubeComplex& x, const WallSet& ws,
                                          const CombinatorialPath& p) {
  if (!p.is_stutter_free()) throw PathError("path is not stutter-free");
  p.require_edge_valid(x);
  CrossingSequence cs;
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    cs.walls.push_back(ws.wall_of(x, p.vertices[i - 1], p.vertices[i]));
  return cs;
}

/// A stutter-free path is geodesic iff its crossing sequence repeats no wall.
inline bool is_geodesic(const CubeComplex& x, const WallSet& ws, const CombinatorialPath& p) {
  return crossing_sequence(x, ws, p).duplicate_free();
}

/// The interval I(u,v): vertices on some geodesic from u to v.
inline std::vector<VertexId> interval(const CubeComplex& x, VertexId u, VertexId v) {
  auto du = distances_from(x, u);
  auto dv = distances_from(x, v);
  if (du[v] == 0xffffffffu)
    throw DomainError("vertices are in different components");
  std::vector<VertexId> out;
  for (VertexId w = 0; w < x.vertex_count(); ++w)
    if (du[w] != 0xffffffffu && dv[w] != 0xffffffffu && du[w] + dv[w] == du[v]) out.push_back(w);
  return out;
}

/// Convexity via intervals: S is convex iff it spans a connected subgraph
/// and I(u,v) lies in S for all pairs u,v in S (a disconnected set is not
/// convex, connectedness being part of the definition).
inline bool is_convex(const CubeComplex& x, const std::vector<VertexId>& s) {
  if (s.empty()) throw DomainError("empty vertex set");
  std::vector<bool> in(x.vertex_count(), false);
  for (VertexId v : s) in[v] = true;

  std::vector<VertexId> stack{s[0]};
  std::vector<bool> seen(x.vertex_count(), false);
  seen[s[0]] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId a = stack.back();
    stack.pop_back();
    for (VertexId b : x.adjacency()[a])
      if (in[b] && !seen[b]) {
        seen[b] = true;
        ++reached;
        stack.push_back(b);
      }
  }
  if (reached != s.size()) return false;

  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      for (VertexId w : interval(x, s[i], s[j]))
        if (!in[w]) return false;
  return true;
}

inline bool is_convex(const CubeComplex& x, const std::vector<std::string>& tokens) {
  std::vector<VertexId> s;
  for (const auto& t : tokens) s.push_back(x.require_vertex(t));
  return is_convex(x, s);
}

/// The lexicographically least geodesic from u to v (least next token at
/// every step); deterministic companion to distance().
inline CombinatorialPath least_geodesic(const CubeComplex& x, VertexId u, VertexId v) {
  auto dv = distances_from(x, v);
  if (dv[u] == 0xffffffffu)
    throw DomainError("vertices are in different components");
  CombinatorialPath p;
  p.vertices.push_back(u);
  VertexId cur = u;
  while (cur != v) {
    for (VertexId w : x.adjacency()[cur]) {  // adjacency sorted => least id wins
      if (dv[w] + 1 == dv[cur]) {
        cur = w;
        break;
      }
    }
    p.vertices.push_back(cur);
  }
  return p;
}

}  // namespace ccx
