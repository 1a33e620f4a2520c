#include <catch2/catch_amalgamated.hpp>

#include "ccx/hyperplanes.hpp"
#include "ccx/metric.hpp"
#include "test_util.hpp"

using namespace ccx;
using namespace ccxtest;

TEST_CASE("walls of the n-cube are the coordinate classes", "[hyperplanes]") {
  for (std::uint32_t n = 1; n <= 3; ++n) {
    std::vector<std::string> corners;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      std::string s = "v";
      for (std::uint32_t b = 0; b < n; ++b) s += ((i >> b) & 1) ? '1' : '0';
      corners.push_back(s);
    }
    CubeComplex x = CubeComplex::from_corner_lists({corners});
    WallSet ws = walls(x);
    CHECK(ws.walls.size() == n);
    for (const auto& w : ws.walls) CHECK(w.edges.size() == (std::size_t{1} << (n - 1)));
  }
}

TEST_CASE("single edge has one wall with one edge", "[hyperplanes]") {
  WallSet ws = walls(edge_complex());
  REQUIRE(ws.walls.size() == 1);
  CHECK(ws.walls[0].edges.size() == 1);
}

TEST_CASE("two-square strip against the brute-force oracle", "[hyperplanes]") {
  CubeComplex x = strip2_complex();
  WallSet ws = walls(x);
  auto oracle = brute_force_walls(x);
  CHECK(ws.walls.size() == oracle.size());
  REQUIRE(ws.walls.size() == 3);
  std::multiset<std::size_t> sizes;
  for (const auto& w : ws.walls) sizes.insert(w.edges.size());
  CHECK(sizes == std::multiset<std::size_t>{2, 2, 3});
  // same classes edge-for-edge
  for (const auto& w : ws.walls) {
    std::set<std::pair<std::string, std::string>> mine;
    for (std::uint32_t e : w.edges) {
      auto [u, v] = x.edges()[e];
      std::string a = x.token(u), b = x.token(v);
      mine.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    }
    CHECK(std::find(oracle.begin(), oracle.end(), mine) != oracle.end());
  }
}

TEST_CASE("walls partition the edge set", "[hyperplanes]") {
  Rng rng(2024);
  auto pool = random_cubings(8, 60, rng);
  pool.push_back(grid2x2_complex());
  pool.push_back(cube3_complex());
  for (const auto& x : pool) {
    WallSet ws = walls(x);
    std::size_t total = 0;
    for (const auto& w : ws.walls) total += w.edges.size();
    CHECK(total == x.edges().size());
    for (std::uint32_t e = 0; e < x.edges().size(); ++e) {
      const auto& w = ws.walls[ws.wall_of_edge[e]];
      CHECK(std::find(w.edges.begin(), w.edges.end(), e) != w.edges.end());
    }
  }
}

TEST_CASE("halfspaces of standard walls", "[hyperplanes]") {
  SECTION("single edge") {
    CubeComplex x = edge_complex();
    WallSet ws = walls(x);
    HalfspacePair hp = halfspaces(x, ws, ws.walls[0]);
    CHECK(hp.side0.size() == 1);
    CHECK(hp.side1.size() == 1);
    CHECK(x.token(hp.side0[0]) == "a");  // side0 holds the least vertex
  }
  SECTION("3-cube: opposite facets") {
    CubeComplex x = cube3_complex();
    WallSet ws = walls(x);
    for (const auto& w : ws.walls) {
      HalfspacePair hp = halfspaces(x, ws, w);
      CHECK(hp.side0.size() == 4);
      CHECK(hp.side1.size() == 4);
      CHECK(hp.side[0] == false);
    }
  }
}

TEST_CASE("separates", "[hyperplanes]") {
  CubeComplex x = cube3_complex();
  WallSet ws = walls(x);
  VertexId a = x.require_vertex("000"), b = x.require_vertex("111");
  for (const auto& w : ws.walls) {
    HalfspacePair hp = halfspaces(x, ws, w);
    CHECK(separates(hp, a, b));
    CHECK_FALSE(separates(hp, a, a));
  }
}

TEST_CASE("tree edge-walls separate exactly the path pairs", "[hyperplanes]") {
  Rng rng(77);
  CubeComplex t = random_tree(18, rng);
  WallSet ws = walls(t);
  auto dist = all_pairs_distances(t);
  for (const auto& w : ws.walls) {
    REQUIRE(w.edges.size() == 1);  // no squares in a tree
    auto [eu, ev] = t.edges()[w.edges[0]];
    HalfspacePair hp = halfspaces(t, ws, w);
    for (VertexId u = 0; u < t.vertex_count(); ++u)
      for (VertexId v = u + 1; v < t.vertex_count(); ++v) {
        // the unique u-v path uses edge (eu,ev) iff their distances split across it
        bool on_path = (dist[u][eu] + 1 + dist[ev][v] == dist[u][v]) ||
                       (dist[u][ev] + 1 + dist[eu][v] == dist[u][v]);
        CHECK(separates(hp, u, v) == on_path);
      }
  }
}

TEST_CASE("non-cubings may fail to separate", "[hyperplanes]") {
  SECTION("4-cycle without square: validator rejects, walls do not separate") {
    CubeComplex x = c4_complex();
    CHECK_FALSE(validate(x).accepted());
    WallSet ws = walls(x);
    CHECK(ws.walls.size() == 4);  // no squares, so every edge is its own wall
    CHECK_THROWS_AS(halfspaces(x, ws, ws.walls[0]), SeparationFailure);
  }
  SECTION("moebius band: the rung wall does not disconnect") {
    CubeComplex x = mobius3_complex();
    CHECK_FALSE(validate(x).accepted());
    WallSet ws = walls(x);
    bool found_failure = false;
    for (const auto& w : ws.walls) {
      if (w.edges.size() != 3) continue;  // the self-crossing rung class
      CHECK_THROWS_AS(halfspaces(x, ws, w), SeparationFailure);
      found_failure = true;
    }
    CHECK(found_failure);
  }
}

TEST_CASE("carriers", "[hyperplanes]") {
  SECTION("3-cube: the whole complex") {
    CubeComplex x = cube3_complex();
    WallSet ws = walls(x);
    Carrier car = carrier(x, ws, ws.walls[0]);
    CHECK(car.complex->vertex_count() == 8);
    CHECK(car.complex->cube_count(3) == 1);
  }
  SECTION("path a-b-c, wall of {a,b}: the edge alone") {
    CubeComplex x = path2_complex();
    WallSet ws = walls(x);
    std::uint32_t w = ws.wall_of(x, x.require_vertex("a"), x.require_vertex("b"));
    Carrier car = carrier(x, ws, ws.walls[w]);
    CHECK(car.complex->vertex_count() == 2);
    CHECK(car.complex->cube_count(1) == 1);
    CHECK(car.ambiguous.empty());
  }
  SECTION("every carrier vertex lies on exactly one dual edge") {
    for (const CubeComplex& x : {square_complex(), cube3_complex(), grid2x2_complex(),
                                 strip2_complex(), tripod_complex()}) {
      WallSet ws = walls(x);
      for (const auto& w : ws.walls) CHECK(carrier(x, ws, w).ambiguous.empty());
    }
  }
}

TEST_CASE("carrier convexity on validated complexes", "[hyperplanes]") {
  Rng rng(11);
  auto pool = random_cubings(6, 50, rng);
  pool.push_back(grid2x2_complex());
  pool.push_back(strip2_complex());
  for (const auto& x : pool) {
    REQUIRE(validate(x).accepted());
    WallSet ws = walls(x);
    for (const auto& w : ws.walls) {
      Carrier car = carrier(x, ws, w);
      std::vector<VertexId> verts;
      for (const auto& t : car.vertices) verts.push_back(x.require_vertex(t));
      CHECK(is_convex(x, verts));
    }
  }
}

TEST_CASE("reflections", "[hyperplanes]") {
  SECTION("single edge: the endpoint swap") {
    CubeComplex x = edge_complex();
    WallSet ws = walls(x);
    Carrier car = carrier(x, ws, ws.walls[0]);
    Automorphism sigma = reflection(car);
    CHECK(sigma.apply_token("a") == "b");
    CHECK(sigma.apply_token("b") == "a");
  }
  SECTION("3-cube: coordinate bit flip") {
    CubeComplex x = cube3_complex();
    WallSet ws = walls(x);
    // wall through edge 000-001 flips the last character
    std::uint32_t w = ws.wall_of(x, x.require_vertex("000"), x.require_vertex("001"));
    Carrier car = carrier(x, ws, ws.walls[w]);
    Automorphism sigma = reflection(car);
    for (const char* tc : {"000", "010", "100", "110"}) {
      std::string t = tc, img = tc;
      img[2] = '1';
      CHECK(sigma.apply_token(t) == img);
    }
  }
  SECTION("strip middle wall swaps across the strip") {
    CubeComplex x = strip2_complex();
    WallSet ws = walls(x);
    std::uint32_t w = ws.wall_of(x, x.require_vertex("00"), x.require_vertex("01"));
    Carrier car = carrier(x, ws, ws.walls[w]);
    REQUIRE(ws.walls[w].edges.size() == 3);
    Automorphism sigma = reflection(car);
    CHECK(sigma.apply_token("00") == "01");
    CHECK(sigma.apply_token("20") == "21");
  }
  SECTION("involution and naturality on all walls of the fixtures") {
    for (const CubeComplex& x : {square_complex(), cube3_complex(), grid2x2_complex(),
                                 strip2_complex()}) {
      WallSet ws = walls(x);
      for (const auto& w : ws.walls) {
        Carrier car = carrier(x, ws, w);
        Automorphism sigma = reflection(car);
        CHECK(sigma.compose(sigma).is_identity());
        // sigma maps each dual edge to itself
        for (std::uint32_t e : w.edges) {
          auto [u, v] = x.edges()[e];
          CHECK(sigma.apply_token(x.token(u)) == x.token(v));
          CHECK(sigma.apply_token(x.token(v)) == x.token(u));
        }
      }
    }
  }
  SECTION("ambiguous dual edges are an error") {
    CubeComplex x = ambiguous_complex();
    CHECK_FALSE(validate(x).accepted());
    WallSet ws = walls(x);
    bool hit = false;
    for (const auto& w : ws.walls) {
      Carrier car = carrier(x, ws, w);
      if (!car.ambiguous.empty()) {
        CHECK_THROWS_AS(reflection(car), AmbiguousDualEdge);
        hit = true;
      }
    }
    CHECK(hit);
  }
}

TEST_CASE("path length parity equals separating wall parity", "[hyperplanes]") {
  Rng rng(5);
  for (const CubeComplex& x : {grid2x2_complex(), cube3_complex()}) {
    WallSet ws = walls(x);
    std::vector<HalfspacePair> sides;
    for (const auto& w : ws.walls) sides.push_back(halfspaces(x, ws, w));
    for (int trial = 0; trial < 30; ++trial) {
      // random walk of random length
      std::vector<VertexId> path{static_cast<VertexId>(rng.below(x.vertex_count()))};
      std::size_t len = rng.below(9);
      for (std::size_t i = 0; i < len; ++i) {
        const auto& nb = x.adjacency()[path.back()];
        path.push_back(nb[rng.below(nb.size())]);
      }
      std::size_t separating = 0;
      for (const auto& hp : sides) separating += hp.separates(path.front(), path.back());
      CHECK((path.size() - 1) % 2 == separating % 2);
    }
  }
}
