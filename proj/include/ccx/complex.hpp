#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ccx {

using VertexId = std::uint32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct BudgetError : Error {
  using Error::Error;
};

/// A cube in canonical parametrization: corner i carries the vertex whose
/// binary coordinates are the bits of i. Canonical means corner 0 holds the
/// lexicographically least token and axes are ordered by the tokens of the
/// corner-0 neighbors, so two parametrizations of the same cube (any
/// coordinate permutation or reflection) collapse to one record.
struct Cube {
  std::vector<VertexId> corners;

  std::uint32_t dim() const {
    return static_cast<std::uint32_t>(std::bit_width(corners.size()) - 1);
  }
};

namespace detail {

struct VecHash {
  std::size_t operator()(const std::vector<VertexId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (VertexId x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Corner list of the face obtained by fixing coordinate `axis` to `bit`.
inline std::vector<VertexId> face_corners(const std::vector<VertexId>& corners,
                                          std::uint32_t axis, std::uint32_t bit) {
  const std::size_t n = corners.size() / 2;
  std::vector<VertexId> out(n);
  const std::size_t lo = (std::size_t{1} << axis) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx = ((i & ~lo) << 1) | (std::size_t{bit} << axis) | (i & lo);
    out[i] = corners[idx];
  }
  return out;
}

}  // namespace detail

/// Finite cube complex over opaque vertex tokens. Immutable once built;
/// cubes are closed under faces and stored canonically, vertex ids follow
/// lexicographic token order.
class CubeComplex {
 public:
  CubeComplex() = default;

  /// Build from corner lists (tokens in binary corner order). Faces are
  /// derived; identical cubes (up to reparametrization) are merged.
  static CubeComplex from_corner_lists(const std::vector<std::vector<std::string>>& records) {
    CubeComplex x;
    x.build(records);
    return x;
  }

  static CubeComplex load(std::istream& in) { return load_string(slurp(in)); }

  /// Parse a CCX document: header `ccx 1`, then `cube t0 t1 ... t_{2^k-1}`
  /// lines; `#` starts a comment.
  static CubeComplex load_string(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::istringstream ls(line);
      std::vector<std::string> tok;
      std::string t;
      while (ls >> t) tok.push_back(t);
      if (tok.empty()) continue;
      if (!saw_header) {
        if (tok.size() != 2 || tok[0] != "ccx" || tok[1] != "1")
          throw ParseError("line " + std::to_string(lineno) + ": expected header 'ccx 1'");
        saw_header = true;
        continue;
      }
      if (tok[0] != "cube")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'cube', got '" + tok[0] + "'");
      tok.erase(tok.begin());
      if (tok.empty() || !std::has_single_bit(tok.size()))
        throw ParseError("line " + std::to_string(lineno) + ": corner count " +
                         std::to_string(tok.size()) + " is not a power of two");
      records.push_back(std::move(tok));
    }
    if (!saw_header) throw ParseError("missing 'ccx 1' header");
    return from_corner_lists(records);
  }

  /// Canonical emission: maximal cubes only, one line each, lines sorted.
  void emit(std::ostream& out) const {
    out << emit_string();
  }

  std::string emit_string() const {
    std::vector<std::string> lines;
    for (std::size_t c = 0; c < cubes_.size(); ++c) {
      if (!maximal_[c]) continue;
      std::string line = "cube";
      for (VertexId v : cubes_[c].corners) line += " " + tokens_[v];
      lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    std::string out = "ccx 1\n";
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

  std::size_t vertex_count() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(VertexId v) const { return tokens_[v]; }

  std::optional<VertexId> find_vertex(std::string_view t) const {
    auto it = std::lower_bound(tokens_.begin(), tokens_.end(), t);
    if (it == tokens_.end() || *it != t) return std::nullopt;
    return static_cast<VertexId>(it - tokens_.begin());
  }

  VertexId require_vertex(std::string_view t) const {
    auto v = find_vertex(t);
    if (!v) throw DomainError("unknown vertex '" + std::string(t) + "'");
    return *v;
  }

  const std::vector<Cube>& cubes() const { return cubes_; }
  std::uint32_t dimension() const { return dimension_; }

  std::size_t cube_count(std::uint32_t dim) const {
    return dim < counts_.size() ? counts_[dim] : 0;
  }

  bool is_maximal(std::size_t cube_index) const { return maximal_[cube_index]; }

  /// Index of the cube with the given corner set, if present. Input in any
  /// parametrization of a cube; plain vertex sets work for dim <= 1.
  std::optional<std::size_t> find_cube(std::vector<VertexId> corners) const {
    if (corners.empty() || !std::has_single_bit(corners.size())) return std::nullopt;
    if (corners.size() <= 2) {
      std::sort(corners.begin(), corners.end());
    } else {
      canonicalize_ids(corners);
    }
    auto it = cube_index_.find(corners);
    if (it == cube_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Cube lookup by vertex set alone (any dimension); resolves through the
  /// per-vertex incidence lists.
  std::optional<std::size_t> find_cube_by_vertex_set(std::vector<VertexId> verts) const {
    if (verts.empty() || !std::has_single_bit(verts.size())) return std::nullopt;
    std::sort(verts.begin(), verts.end());
    for (std::size_t c : cubes_at(verts[0])) {
      if (cubes_[c].corners.size() != verts.size()) continue;
      std::vector<VertexId> s = cubes_[c].corners;
      std::sort(s.begin(), s.end());
      if (s == verts) return c;
    }
    return std::nullopt;
  }

  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

  std::optional<std::uint32_t> edge_index(VertexId u, VertexId v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_index_.find({u, v});
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Sorted neighbor lists of the 1-skeleton.
  const std::vector<std::vector<VertexId>>& adjacency() const { return adjacency_; }

  /// Indices of all cubes containing vertex v.
  const std::vector<std::size_t>& cubes_at(VertexId v) const { return vertex_cubes_[v]; }

  bool operator==(const CubeComplex& other) const {
    if (tokens_ != other.tokens_) return false;
    auto key = [](const CubeComplex& x) {
      std::vector<std::vector<VertexId>> k;
      k.reserve(x.cubes_.size());
      for (const auto& c : x.cubes_) k.push_back(c.corners);
      std::sort(k.begin(), k.end());
      return k;
    };
    return key(*this) == key(other);
  }

  /// Full subcomplex on the given cube set (face closure included by
  /// re-building); tokens are preserved so vertices can be matched by name.
  CubeComplex subcomplex(const std::vector<std::size_t>& cube_indices) const {
    std::vector<std::vector<std::string>> records;
    records.reserve(cube_indices.size());
    for (std::size_t c : cube_indices) {
      std::vector<std::string> rec;
      rec.reserve(cubes_[c].corners.size());
      for (VertexId v : cubes_[c].corners) rec.push_back(tokens_[v]);
      records.push_back(std::move(rec));
    }
    return from_corner_lists(records);
  }

 private:
  static std::string slurp(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Reparametrize in place: corner 0 = least id, axes sorted by the ids of
  // the corner-0 neighbors. Covers all coordinate permutations/reflections.
  static void canonicalize_ids(std::vector<VertexId>& corners) {
    const std::size_t n = corners.size();
    if (n <= 2) {
      std::sort(corners.begin(), corners.end());
      return;
    }
    const std::uint32_t k = static_cast<std::uint32_t>(std::bit_width(n) - 1);
    std::size_t base = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (corners[i] < corners[base]) base = i;
    std::vector<std::uint32_t> axes(k);
    for (std::uint32_t j = 0; j < k; ++j) axes[j] = j;
    std::sort(axes.begin(), axes.end(), [&](std::uint32_t a, std::uint32_t b) {
      return corners[base ^ (std::size_t{1} << a)] < corners[base ^ (std::size_t{1} << b)];
    });
    std::vector<VertexId> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t old = base;
      for (std::uint32_t s = 0; s < k; ++s)
        if (i & (std::size_t{1} << s)) old ^= std::size_t{1} << axes[s];
      out[i] = corners[old];
    }
    corners.swap(out);
  }

  void build(const std::vector<std::vector<std::string>>& records) {
    // Freeze the token table first so cube corners can be stored as ids.
    std::vector<std::string> toks;
    for (const auto& rec : records)
      for (const auto& t : rec) toks.push_back(t);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    tokens_ = std::move(toks);

    auto id_of = [&](const std::string& t) {
      return static_cast<VertexId>(
          std::lower_bound(tokens_.begin(), tokens_.end(), t) - tokens_.begin());
    };

    // Insert input cubes, then close under faces breadth-first.
    std::vector<std::vector<VertexId>> pending;
    for (const auto& rec : records) {
      std::vector<VertexId> ids(rec.size());
      for (std::size_t i = 0; i < rec.size(); ++i) ids[i] = id_of(rec[i]);
      std::vector<VertexId> sorted = ids;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        std::string msg = "duplicate corner in cube:";
        for (const auto& t : rec) msg += " " + t;
        throw ParseError(msg);
      }
      canonicalize_ids(ids);
      pending.push_back(std::move(ids));
    }

    auto add_cube = [&](std::vector<VertexId> corners, bool as_face) -> std::size_t {
      auto it = cube_index_.find(corners);
      if (it != cube_index_.end()) {
        if (as_face) maximal_[it->second] = false;
        return it->second;
      }
      std::size_t idx = cubes_.size();
      cube_index_.emplace(corners, idx);
      cubes_.push_back(Cube{std::move(corners)});
      maximal_.push_back(!as_face);
      return idx;
    };

    std::vector<std::size_t> queue;
    for (auto& rec : pending) queue.push_back(add_cube(std::move(rec), false));
    // Every vertex is a 0-cube even when it only appears inside bigger cubes.
    for (VertexId v = 0; v < tokens_.size(); ++v) {
      auto it = cube_index_.find(std::vector<VertexId>{v});
      if (it == cube_index_.end()) add_cube({v}, false);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t cu = queue[qi];
      const std::uint32_t k = cubes_[cu].dim();
      if (k == 0) continue;
      for (std::uint32_t axis = 0; axis < k; ++axis) {
        for (std::uint32_t bit = 0; bit < 2; ++bit) {
          auto fc = detail::face_corners(cubes_[cu].corners, axis, bit);
          canonicalize_ids(fc);
          const std::size_t before = cubes_.size();
          const std::size_t idx = add_cube(std::move(fc), true);
          if (idx == before) queue.push_back(idx);
        }
      }
    }

    // Sort cubes by (dim, corners) so indices are deterministic.
    std::vector<std::size_t> order(cubes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cubes_[a].corners.size() != cubes_[b].corners.size())
        return cubes_[a].corners.size() < cubes_[b].corners.size();
      return cubes_[a].corners < cubes_[b].corners;
    });
    std::vector<Cube> cubes2(cubes_.size());
    std::vector<bool> max2(cubes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      cubes2[i] = std::move(cubes_[order[i]]);
      max2[i] = maximal_[order[i]];
    }
    cubes_ = std::move(cubes2);
    maximal_ = std::move(max2);
    cube_index_.clear();
    for (std::size_t i = 0; i < cubes_.size(); ++i) cube_index_.emplace(cubes_[i].corners, i);

    counts_.assign(dimension_ = 0, 0);
    for (const auto& c : cubes_) dimension_ = std::max(dimension_, c.dim());
    counts_.assign(dimension_ + 1, 0);
    for (const auto& c : cubes_) ++counts_[c.dim()];

    adjacency_.assign(tokens_.size(), {});
    for (const auto& c : cubes_) {
      if (c.dim() != 1) continue;
      VertexId u = c.corners[0], v = c.corners[1];
      edges_.push_back({u, v});
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    std::sort(edges_.begin(), edges_.end());
    for (auto& a : adjacency_) std::sort(a.begin(), a.end());
    for (std::uint32_t e = 0; e < edges_.size(); ++e) edge_index_.emplace(edges_[e], e);

    vertex_cubes_.assign(tokens_.size(), {});
    for (std::size_t c = 0; c < cubes_.size(); ++c)
      for (VertexId v : cubes_[c].corners) vertex_cubes_[v].push_back(c);
  }

  std::vector<std::string> tokens_;
  std::vector<Cube> cubes_;
  std::vector<bool> maximal_;
  std::unordered_map<std::vector<VertexId>, std::size_t, detail::VecHash> cube_index_;
  std::vector<std::size_t> counts_;
  std::uint32_t dimension_ = 0;
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::map<std::pair<VertexId, VertexId>, std::uint32_t> edge_index_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::vector<std::size_t>> vertex_cubes_;
};

/// Link of a vertex: link-vertex i corresponds to the edge {base,
/// neighbor[i]}; every cube through the base contributes the simplex of its
/// edges at the base.
struct LinkComplex {
  VertexId base = 0;
  std::vector<VertexId> neighbor;                        // sorted
  std::vector<std::vector<std::uint32_t>> simplices;     // sorted lists of link-vertex ids

  std::size_t simplex_count(std::size_t size) const {
    std::size_t n = 0;
    for (const auto& s : simplices) n += (s.size() == size);
    return n;
  }

  bool has_simplex(std::vector<std::uint32_t> s) const {
    std::sort(s.begin(), s.end());
    return std::find(simplices.begin(), simplices.end(), s) != simplices.end();
  }
};

inline LinkComplex link(const CubeComplex& x, VertexId v) {
  if (v >= x.vertex_count()) throw DomainError("unknown vertex id");
  LinkComplex lk;
  lk.base = v;
  lk.neighbor = x.adjacency()[v];
  auto lv_of = [&](VertexId w) {
    return static_cast<std::uint32_t>(
        std::lower_bound(lk.neighbor.begin(), lk.neighbor.end(), w) - lk.neighbor.begin());
  };
  for (std::size_t c : x.cubes_at(v)) {
    const Cube& q = x.cubes()[c];
    if (q.dim() == 0) continue;
    std::size_t pos = 0;
    while (q.corners[pos] != v) ++pos;
    std::vector<std::uint32_t> simplex;
    for (std::uint32_t j = 0; j < q.dim(); ++j)
      simplex.push_back(lv_of(q.corners[pos ^ (std::size_t{1} << j)]));
    std::sort(simplex.begin(), simplex.end());
    lk.simplices.push_back(std::move(simplex));
  }
  std::sort(lk.simplices.begin(), lk.simplices.end());
  return lk;
}

inline LinkComplex link(const CubeComplex& x, std::string_view token) {
  return link(x, x.require_vertex(token));
}

struct ValidationDefect {
  std::string kind;
  std::string detail;
};

/// Outcome of the cubing checks. All four flags true <=> the complex is
/// accepted as a cubing: a face-closed, compatible complex whose links are
/// flag and whose 1-skeleton is a median graph realized by the complex
/// (every 4-cycle of the skeleton spans a filled square).
struct ValidationReport {
  bool closure_ok = true;
  bool compatibility_ok = true;
  bool links_flag_ok = true;
  bool median_ok = true;
  std::vector<ValidationDefect> failures;

  bool accepted() const { return closure_ok && compatibility_ok && links_flag_ok && median_ok; }
};

namespace detail {

// Simple dynamic bitset over uint64 words.
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

inline std::size_t and3_popcount(const Bits& a, const Bits& b, const Bits& c) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.w.size(); ++i) n += std::popcount(a.w[i] & b.w[i] & c.w[i]);
  return n;
}

inline std::vector<std::uint16_t> bfs_row(const CubeComplex& x, VertexId src) {
  constexpr std::uint16_t kInf = 0xffff;
  std::vector<std::uint16_t> d(x.vertex_count(), kInf);
  std::vector<VertexId> frontier{src};
  d[src] = 0;
  while (!frontier.empty()) {
    std::vector<VertexId> next;
    for (VertexId u : frontier)
      for (VertexId v : x.adjacency()[u])
        if (d[v] == kInf) {
          d[v] = static_cast<std::uint16_t>(d[u] + 1);
          next.push_back(v);
        }
    frontier.swap(next);
  }
  return d;
}

// Enumerate maximal cliques (Bron-Kerbosch, no pivoting; link graphs are small).
inline void maximal_cliques(const std::vector<Bits>& adj, std::vector<std::uint32_t>& r,
                            std::vector<std::uint32_t> p, std::vector<std::uint32_t> xset,
                            const std::function<void(const std::vector<std::uint32_t>&)>& emit) {
  if (p.empty() && xset.empty()) {
    if (!r.empty()) emit(r);
    return;
  }
  while (!p.empty()) {
    std::uint32_t v = p.back();
    std::vector<std::uint32_t> p2, x2;
    for (std::uint32_t u : p)
      if (adj[v].get(u)) p2.push_back(u);
    for (std::uint32_t u : xset)
      if (adj[v].get(u)) x2.push_back(u);
    r.push_back(v);
    maximal_cliques(adj, r, std::move(p2), std::move(x2), emit);
    r.pop_back();
    p.pop_back();
    xset.push_back(v);
  }
}

}  // namespace detail

/// All-pairs distances of the 1-skeleton (0xffff when disconnected).
inline std::vector<std::vector<std::uint16_t>> all_pairs_distances(const CubeComplex& x) {
  std::vector<std::vector<std::uint16_t>> d(x.vertex_count());
  for (VertexId v = 0; v < x.vertex_count(); ++v) d[v] = detail::bfs_row(x, v);
  return d;
}

namespace detail {

inline std::string corner_names(const CubeComplex& x, const std::vector<VertexId>& vs) {
  std::string s;
  for (VertexId v : vs) {
    if (!s.empty()) s += " ";
    s += x.token(v);
  }
  return s;
}

inline void check_closure(const CubeComplex& x, ValidationReport& rep) {
  for (const auto& c : x.cubes()) {
    for (std::uint32_t axis = 0; axis < c.dim(); ++axis) {
      for (std::uint32_t bit = 0; bit < 2; ++bit) {
        auto fc = face_corners(c.corners, axis, bit);
        if (!x.find_cube(fc)) {
          rep.closure_ok = false;
          rep.failures.push_back({"closure", "missing face: " + corner_names(x, fc)});
        }
      }
    }
  }
}

// True when the position set P inside a cube of dimension k is an affine
// subcube (the corner positions of one of its faces).
inline bool is_subcube_positions(const std::vector<std::size_t>& p) {
  std::size_t all_or = 0, all_and = ~std::size_t{0};
  for (std::size_t i : p) {
    all_or |= i;
    all_and &= i;
  }
  const std::size_t varying = all_or ^ all_and;
  if (p.size() != (std::size_t{1} << std::popcount(varying))) return false;
  for (std::size_t i : p)
    if ((i & ~varying) != all_and) return false;
  return true;
}

inline void check_compatibility(const CubeComplex& x, ValidationReport& rep) {
  // Pairs that share a vertex are the only ones that can intersect.
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    const auto& cs = x.cubes_at(v);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        auto key = std::minmax(cs[i], cs[j]);
        if (!seen.insert(key).second) continue;
        const auto& a = x.cubes()[key.first].corners;
        const auto& b = x.cubes()[key.second].corners;
        std::vector<VertexId> bs = b;
        std::sort(bs.begin(), bs.end());
        std::vector<std::size_t> pa;
        std::vector<VertexId> common;
        for (std::size_t p = 0; p < a.size(); ++p)
          if (std::binary_search(bs.begin(), bs.end(), a[p])) {
            pa.push_back(p);
            common.push_back(a[p]);
          }
        if (common.empty()) continue;
        std::vector<std::size_t> pb;
        std::vector<VertexId> as = common;
        std::sort(as.begin(), as.end());
        for (std::size_t p = 0; p < b.size(); ++p)
          if (std::binary_search(as.begin(), as.end(), b[p])) pb.push_back(p);
        if (!is_subcube_positions(pa) || !is_subcube_positions(pb)) {
          rep.compatibility_ok = false;
          rep.failures.push_back(
              {"compatibility", "cubes (" + corner_names(x, a) + ") and (" + corner_names(x, b) +
                                    ") intersect in a non-face: " + corner_names(x, common)});
        }
      }
    }
  }
}

inline void check_flag_links(const CubeComplex& x, ValidationReport& rep) {
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    LinkComplex lk = link(x, v);
    const std::size_t n = lk.neighbor.size();
    if (n < 3) continue;  // cliques of size <= 2 are simplices by construction
    std::vector<Bits> adj(n, Bits(n));
    std::set<std::vector<std::uint32_t>> simplex_set(lk.simplices.begin(), lk.simplices.end());
    for (const auto& s : lk.simplices) {
      if (s.size() != 2) continue;
      adj[s[0]].set(s[1]);
      adj[s[1]].set(s[0]);
    }
    std::vector<std::uint32_t> r, p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    bool ok = true;
    std::vector<std::vector<std::uint32_t>> bad;
    maximal_cliques(adj, r, std::move(p), {}, [&](const std::vector<std::uint32_t>& clique) {
      if (clique.size() < 3) return;
      std::vector<std::uint32_t> s = clique;
      std::sort(s.begin(), s.end());
      if (!simplex_set.count(s)) {
        ok = false;
        bad.push_back(s);
      }
    });
    if (!ok) {
      rep.links_flag_ok = false;
      for (const auto& s : bad) {
        std::string names;
        for (std::uint32_t i : s) names += (names.empty() ? "" : " ") + x.token(lk.neighbor[i]);
        rep.failures.push_back({"flag-link", "link of " + x.token(v) +
                                                 " has an unfilled clique on edges toward: " + names});
      }
    }
  }
}

inline void check_median(const CubeComplex& x, ValidationReport& rep, unsigned jobs) {
  const std::size_t n = x.vertex_count();
  if (n == 0) return;
  auto dist = all_pairs_distances(x);
  for (VertexId v = 0; v < n; ++v) {
    if (dist[0][v] == 0xffff) {
      rep.median_ok = false;
      rep.failures.push_back({"median", "1-skeleton is disconnected (" + x.token(0) +
                                            " does not reach " + x.token(v) + ")"});
      return;
    }
  }

  // Interval indicator bitsets I(u,v) = {w : d(u,w)+d(w,v) = d(u,v)}.
  std::vector<Bits> interval(n * n, Bits(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u; v < n; ++v) {
      Bits& b = interval[u * n + v];
      for (std::size_t w = 0; w < n; ++w)
        if (dist[u][w] + dist[w][v] == dist[u][v]) b.set(w);
      interval[v * n + u] = b;
    }

  std::vector<std::vector<ValidationDefect>> defects(std::max(1u, jobs));
  auto run = [&](unsigned tid, unsigned stride) {
    for (std::size_t u = tid; u < n; u += stride)
      for (std::size_t v = u + 1; v < n; ++v)
        for (std::size_t w = v + 1; w < n; ++w) {
          std::size_t m = and3_popcount(interval[u * n + v], interval[v * n + w],
                                        interval[u * n + w]);
          if (m != 1)
            defects[tid].push_back({"median", "triple (" + x.token(static_cast<VertexId>(u)) +
                                                  ", " + x.token(static_cast<VertexId>(v)) + ", " +
                                                  x.token(static_cast<VertexId>(w)) + ") has " +
                                                  std::to_string(m) + " medians"});
        }
  };
  if (jobs <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(run, t, jobs);
    for (auto& th : pool) th.join();
  }
  for (auto& dv : defects)
    for (auto& d : dv) {
      rep.median_ok = false;
      rep.failures.push_back(std::move(d));
    }

  // The skeleton must be realized at dimension 2: every 4-cycle spans a
  // filled square (a median skeleton alone does not rule out empty squares).
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      if (dist[u][v] != 2) continue;
      std::vector<VertexId> common;
      const auto& au = x.adjacency()[u];
      for (VertexId w : x.adjacency()[v])
        if (std::binary_search(au.begin(), au.end(), w)) common.push_back(w);
      for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j) {
          std::vector<VertexId> sq{static_cast<VertexId>(u), common[i], common[j],
                                   static_cast<VertexId>(v)};
          if (!x.find_cube_by_vertex_set(sq)) {
            rep.median_ok = false;
            rep.failures.push_back({"median", "4-cycle without a square: " +
                                                  corner_names(x, sq)});
          }
        }
    }
}

}  // namespace detail

/// Run the four cubing checks. Defects are reported, never thrown. The
/// median stage may be partitioned across `jobs` workers; the outcome does
/// not depend on the partition.
inline ValidationReport validate(const CubeComplex& x, unsigned jobs = 1) {
  ValidationReport rep;
  detail::check_closure(x, rep);
  detail::check_compatibility(x, rep);
  detail::check_flag_links(x, rep);
  detail::check_median(x, rep, jobs);
  return rep;
}

}  // namespace ccx
