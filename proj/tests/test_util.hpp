#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/complex.hpp"
#include "ccx/implicit.hpp"

namespace ccxtest {

using namespace ccx;

inline std::string data_path(const std::string& name) {
  return std::string(CCX_DATA_DIR) + "/" + name;
}

inline CubeComplex load_fixture(const std::string& name) {
  std::ifstream in(data_path(name));
  return CubeComplex::load(in);
}

// --- inline fixtures -------------------------------------------------------

inline CubeComplex edge_complex() {
  return CubeComplex::from_corner_lists({{"a", "b"}});
}

inline CubeComplex path2_complex() {
  return CubeComplex::from_corner_lists({{"a", "b"}, {"b", "c"}});
}

inline CubeComplex square_complex() {
  return CubeComplex::from_corner_lists({{"00", "01", "10", "11"}});
}

inline CubeComplex cube3_complex() {
  return CubeComplex::from_corner_lists(
      {{"000", "001", "010", "011", "100", "101", "110", "111"}});
}

inline CubeComplex tripod_complex() {
  return CubeComplex::from_corner_lists({{"c", "x"}, {"c", "y"}, {"c", "z"}});
}

inline CubeComplex grid2x2_complex() {
  return CubeComplex::from_corner_lists({{"00", "01", "10", "11"},
                                         {"01", "02", "11", "12"},
                                         {"10", "11", "20", "21"},
                                         {"11", "12", "21", "22"}});
}

inline CubeComplex strip2_complex() {
  return CubeComplex::from_corner_lists({{"00", "10", "01", "11"}, {"10", "20", "11", "21"}});
}

inline CubeComplex c4_complex() {
  return CubeComplex::from_corner_lists({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
}

// Three squares pairwise sharing edges at one vertex, no 3-cube filling:
// the link of v holds an empty triangle.
inline CubeComplex empty_corner_complex() {
  return CubeComplex::from_corner_lists(
      {{"v", "a", "b", "ab"}, {"v", "b", "c", "bc"}, {"v", "a", "c", "ac"}});
}

// Moebius band of three squares; the 1-skeleton is K_{3,3}. Not a cubing:
// walls self-cross and triples acquire several medians.
inline CubeComplex mobius3_complex() {
  return CubeComplex::from_corner_lists(
      {{"a1", "a2", "b1", "b2"}, {"b1", "b2", "c1", "c2"}, {"c1", "c2", "a2", "a1"}});
}

// Two squares chained so the wall {ab, xy, bc} passes twice through b.
inline CubeComplex ambiguous_complex() {
  return CubeComplex::from_corner_lists({{"a", "b", "x", "y"}, {"x", "y", "b", "c"}});
}

// The 3-cube with one square left unfilled; a valid complex but not flag.
inline CubeComplex holed_cube3_complex() {
  std::vector<std::vector<std::string>> squares;
  const char* names[8] = {"000", "001", "010", "011", "100", "101", "110", "111"};
  for (int axis0 = 0; axis0 < 3; ++axis0)
    for (int axis1 = axis0 + 1; axis1 < 3; ++axis1)
      for (int fixedbit = 0; fixedbit < 2; ++fixedbit) {
        int fixedaxis = 3 - axis0 - axis1;
        int base = fixedbit << fixedaxis;
        std::vector<std::string> sq{names[base], names[base | (1 << axis0)],
                                    names[base | (1 << axis1)],
                                    names[base | (1 << axis0) | (1 << axis1)]};
        squares.push_back(sq);
      }
  squares.pop_back();  // drop one square
  return CubeComplex::from_corner_lists(squares);
}

// --- implicit fixtures -----------------------------------------------------

// The standard cubulation of the integers: an infinite line.
inline ImplicitComplex line_complex() {
  ImplicitComplex ic;
  ic.name = "line";
  ic.seed = "0";
  ic.neighbors = [](const std::string& t) {
    long v = std::stol(t);
    return std::vector<std::string>{std::to_string(v - 1), std::to_string(v + 1)};
  };
  ic.cubes_at = [](const std::string& t, const std::function<bool(const std::string&)>& keep) {
    long v = std::stol(t);
    std::vector<std::vector<std::string>> out;
    for (long u : {v - 1, v + 1}) {
      std::string a = std::to_string(std::min(u, v)), b = std::to_string(std::max(u, v));
      if (keep(a) && keep(b)) out.push_back({a, b});
    }
    return out;
  };
  return ic;
}

inline ImplicitMap line_shift(long k) {
  return ImplicitMap{"shift" + std::to_string(k),
                     [k](const std::string& t) { return std::to_string(std::stol(t) + k); },
                     [k](const std::string& t) { return std::to_string(std::stol(t) - k); }};
}

inline ImplicitMap line_reflect_at(long c) {  // vertex reflection x -> 2c - x
  return ImplicitMap{"reflect" + std::to_string(c),
                     [c](const std::string& t) { return std::to_string(2 * c - std::stol(t)); },
                     [c](const std::string& t) { return std::to_string(2 * c - std::stol(t)); }};
}

inline ImplicitMap line_reflect_edge(long c) {  // edge-midpoint reflection x -> 2c + 1 - x
  return ImplicitMap{
      "ereflect" + std::to_string(c),
      [c](const std::string& t) { return std::to_string(2 * c + 1 - std::stol(t)); },
      [c](const std::string& t) { return std::to_string(2 * c + 1 - std::stol(t)); }};
}

// --- oracles ----------------------------------------------------------------

// Independent wall oracle: naive repeated sweeping instead of union-find.
inline std::vector<std::set<std::pair<std::string, std::string>>> brute_force_walls(
    const CubeComplex& x) {
  auto key = [&](VertexId u, VertexId v) {
    std::string a = x.token(u), b = x.token(v);
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  std::vector<std::set<std::pair<std::string, std::string>>> classes;
  for (const auto& [u, v] : x.edges()) classes.push_back({key(u, v)});
  auto merge_if = [&](const std::pair<std::string, std::string>& e1,
                      const std::pair<std::string, std::string>& e2) {
    std::size_t i1 = SIZE_MAX, i2 = SIZE_MAX;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i].count(e1)) i1 = i;
      if (classes[i].count(e2)) i2 = i;
    }
    if (i1 != i2) {
      classes[i1].insert(classes[i2].begin(), classes[i2].end());
      classes.erase(classes.begin() + static_cast<long>(i2));
    }
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t before = classes.size();
    for (const auto& c : x.cubes()) {
      if (c.dim() != 2) continue;
      merge_if(key(c.corners[0], c.corners[1]), key(c.corners[2], c.corners[3]));
      merge_if(key(c.corners[0], c.corners[2]), key(c.corners[1], c.corners[3]));
    }
    changed = classes.size() != before;
  }
  return classes;
}

// All stutter-free paths of length <= max_len starting anywhere.
inline std::vector<std::vector<VertexId>> all_paths_up_to(const CubeComplex& x,
                                                          std::size_t max_len) {
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> cur;
  std::function<void()> rec = [&]() {
    out.push_back(cur);
    if (cur.size() > max_len) return;
    if (cur.size() == max_len + 1) return;
    for (VertexId nb : x.adjacency()[cur.back()]) {
      cur.push_back(nb);
      rec();
      cur.pop_back();
    }
  };
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    cur = {v};
    rec();
  }
  return out;
}

// Deterministic xorshift for reproducible random structures in tests.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

// Random tree on n vertices (attachment process), as a cube complex.
inline CubeComplex random_tree(std::size_t n, Rng& rng) {
  std::vector<std::vector<std::string>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::size_t parent = rng.below(v);
    edges.push_back({"t" + std::to_string(parent), "t" + std::to_string(v)});
  }
  if (n == 1) edges.push_back({"t0"});
  return CubeComplex::from_corner_lists(edges);
}

// Random staircase polyomino (Young-diagram shape): hole-free, hence a cubing.
inline CubeComplex random_staircase(std::size_t cols, std::size_t max_height, Rng& rng) {
  std::vector<std::size_t> heights(cols);
  std::size_t h = max_height;
  for (std::size_t c = 0; c < cols; ++c) {
    h = 1 + rng.below(h);
    heights[c] = h;
  }
  auto name = [](std::size_t i, std::size_t j) {
    return "g" + std::to_string(i) + "_" + std::to_string(j);
  };
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < heights[c]; ++r)
      cells.push_back({name(c, r), name(c, r + 1), name(c + 1, r), name(c + 1, r + 1)});
  return CubeComplex::from_corner_lists(cells);
}

// Box complex [0,a] x [0,b] (x [0,c]).
inline CubeComplex box_complex(std::size_t a, std::size_t b, std::size_t c = 0) {
  auto name = [](std::size_t i, std::size_t j, std::size_t k) {
    return "b" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
  };
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      if (c == 0) {
        cells.push_back({name(i, j, 0), name(i, j + 1, 0), name(i + 1, j, 0),
                         name(i + 1, j + 1, 0)});
      } else {
        for (std::size_t k = 0; k < c; ++k) {
          std::vector<std::string> cell;
          for (std::size_t m = 0; m < 8; ++m)
            cell.push_back(name(i + ((m >> 2) & 1), j + ((m >> 1) & 1), k + (m & 1)));
          // corner order: bit0 = k-axis, bit1 = j-axis, bit2 = i-axis
          cells.push_back(cell);
        }
      }
    }
  return CubeComplex::from_corner_lists(cells);
}

// A pool of validated random cubings for property tests.
inline std::vector<CubeComplex> random_cubings(std::size_t count, std::size_t max_vertices,
                                               Rng& rng) {
  std::vector<CubeComplex> out;
  std::size_t kind = 0;
  while (out.size() < count) {
    CubeComplex x;
    switch (kind++ % 4) {
      case 0: x = random_tree(2 + rng.below(max_vertices - 1), rng); break;
      case 1: x = random_staircase(1 + rng.below(6), 1 + rng.below(5), rng); break;
      case 2: x = box_complex(1 + rng.below(3), 1 + rng.below(3), rng.below(3)); break;
      default: {
        std::size_t dim = 1 + rng.below(4);
        std::vector<std::string> corners;
        for (std::size_t i = 0; i < (std::size_t{1} << dim); ++i) {
          std::string s = "h";
          for (std::size_t b = 0; b < dim; ++b) s += ((i >> b) & 1) ? '1' : '0';
          corners.push_back(s);
        }
        x = CubeComplex::from_corner_lists({corners});
        break;
      }
    }
    if (x.vertex_count() > max_vertices) continue;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace ccxtest
