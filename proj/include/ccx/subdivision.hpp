#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccx/automorphism.hpp"
#include "ccx/complex.hpp"

namespace ccx {

/// Stable name for the barycenter of a cube: its corner tokens, sorted and
/// joined by '+'.
inline std::string barycenter_token(const CubeComplex& x, const Cube& c) {
  std::vector<std::string> toks;
  toks.reserve(c.corners.size());
  for (VertexId v : c.corners) toks.push_back(x.token(v));
  std::sort(toks.begin(), toks.end());
  std::string out = toks[0];
  for (std::size_t i = 1; i < toks.size(); ++i) out += "+" + toks[i];
  return out;
}

/// The cubical subdivision X' of X together with the barycenter bijection.
/// Vertices of X' are the cubes of X; a k-cube of X' is a face pair F <= G
/// with codimension k, its corners the barycenters of the faces between.
struct SubdivisionMap {
  std::shared_ptr<const CubeComplex> subdivided;
  std::vector<std::size_t> cube_of;  // X' vertex id -> cube index in the source

  const CubeComplex& complex() const { return *subdivided; }
};

inline SubdivisionMap subdivide(const CubeComplex& x) {
  std::vector<std::vector<std::string>> records;

  for (const auto& g : x.cubes()) {
    const std::uint32_t gd = g.dim();
    // Faces of g are (fixed-axes mask, fixed bits); the pair-cube for
    // (F, g) frees subsets of F's fixed axes one at a time.
    for (std::uint32_t mask = 0; mask < (1u << gd); ++mask) {
      std::vector<std::uint32_t> fixed_axes;
      for (std::uint32_t j = 0; j < gd; ++j)
        if (mask & (1u << j)) fixed_axes.push_back(j);
      const std::uint32_t k = static_cast<std::uint32_t>(fixed_axes.size());
      for (std::uint32_t bits = 0;; ++bits) {
        std::uint32_t fixed_bits = 0;
        for (std::uint32_t s = 0; s < k; ++s)
          if (bits & (1u << s)) fixed_bits |= 1u << fixed_axes[s];

        std::vector<std::string> corners(std::size_t{1} << k);
        for (std::uint32_t t = 0; t < (1u << k); ++t) {
          std::uint32_t free_mask = 0;
          for (std::uint32_t s = 0; s < k; ++s)
            if (t & (1u << s)) free_mask |= 1u << fixed_axes[s];
          const std::uint32_t hmask = mask & ~free_mask;
          const std::uint32_t hbits = fixed_bits & hmask;
          std::vector<std::string> verts;
          for (std::size_t i = 0; i < g.corners.size(); ++i)
            if ((i & hmask) == hbits) verts.push_back(x.token(g.corners[i]));
          std::sort(verts.begin(), verts.end());
          std::string tok = verts[0];
          for (std::size_t i = 1; i < verts.size(); ++i) tok += "+" + verts[i];
          corners[t] = std::move(tok);
        }
        records.push_back(std::move(corners));

        if (k == 0 || bits + 1 == (1u << k)) break;
      }
    }
  }

  SubdivisionMap sm;
  sm.subdivided = std::make_shared<CubeComplex>(CubeComplex::from_corner_lists(records));

  std::unordered_map<std::string, std::size_t> by_token;
  for (std::size_t c = 0; c < x.cubes().size(); ++c)
    by_token.emplace(barycenter_token(x, x.cubes()[c]), c);
  sm.cube_of.resize(sm.subdivided->vertex_count());
  for (VertexId v = 0; v < sm.subdivided->vertex_count(); ++v) {
    auto it = by_token.find(sm.subdivided->token(v));
    if (it == by_token.end())
      throw Error("subdivision vertex without a source cube: " + sm.subdivided->token(v));
    sm.cube_of[v] = it->second;
  }
  return sm;
}

/// The automorphism of X' induced by f on X: barycenter of Q goes to the
/// barycenter of f(Q).
inline Automorphism induce_automorphism(const SubdivisionMap& sm, const Automorphism& f) {
  const CubeComplex& x = f.domain();
  std::vector<std::pair<std::string, std::string>> map;
  for (VertexId v = 0; v < sm.subdivided->vertex_count(); ++v) {
    const Cube& q = x.cubes()[sm.cube_of[v]];
    auto img = f.image_corners(q);
    auto idx = x.find_cube(img);
    if (!idx) throw AutomorphismError("image of a cube is not a cube");
    map.push_back({sm.subdivided->token(v), barycenter_token(x, x.cubes()[*idx])});
  }
  return Automorphism::from_token_map(sm.subdivided, map);
}

}  // namespace ccx
