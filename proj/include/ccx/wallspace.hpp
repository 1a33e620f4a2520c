#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/automorphism.hpp"
#include "ccx/complex.hpp"

namespace ccx {

struct WallspaceError : Error {
  using Error::Error;
};

/// A finite discrete space with walls: points plus two-block partitions.
/// Duplicate walls (the same partition listed twice) are kept as distinct
/// walls; they count separately in the wall distance.
class Wallspace {
 public:
  struct Partition {
    std::vector<std::uint32_t> block0, block1;  // sorted point indices; block0 holds point 0
  };

  static Wallspace from_lists(const std::vector<std::string>& points,
                              const std::vector<std::pair<std::vector<std::string>,
                                                          std::vector<std::string>>>& walls) {
    Wallspace w;
    w.points_ = points;
    std::sort(w.points_.begin(), w.points_.end());
    w.points_.erase(std::unique(w.points_.begin(), w.points_.end()), w.points_.end());
    for (const auto& [a, b] : walls) w.add_wall(a, b);
    return w;
  }

  /// Parse a WSP document: `wsp 1`, a `points ...` line, then `wall a b | c d`
  /// lines.
  static Wallspace load_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    std::size_t lineno = 0;
    std::vector<std::string> points;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> walls;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::istringstream ls(line);
      std::vector<std::string> tok;
      std::string t;
      while (ls >> t) tok.push_back(t);
      if (tok.empty()) continue;
      if (!saw_header) {
        if (tok.size() != 2 || tok[0] != "wsp" || tok[1] != "1")
          throw ParseError("line " + std::to_string(lineno) + ": expected header 'wsp 1'");
        saw_header = true;
        continue;
      }
      if (tok[0] == "points") {
        points.insert(points.end(), tok.begin() + 1, tok.end());
      } else if (tok[0] == "wall") {
        auto bar = std::find(tok.begin(), tok.end(), "|");
        if (bar == tok.end())
          throw ParseError("line " + std::to_string(lineno) + ": wall line lacks '|'");
        walls.push_back({{tok.begin() + 1, bar}, {bar + 1, tok.end()}});
      } else {
        throw ParseError("line " + std::to_string(lineno) + ": expected 'points' or 'wall'");
      }
    }
    if (!saw_header) throw ParseError("missing 'wsp 1' header");
    return from_lists(points, walls);
  }

  std::size_t point_count() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(std::uint32_t i) const { return points_[i]; }

  std::uint32_t require_point(const std::string& t) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    if (it == points_.end() || *it != t) throw DomainError("unknown point '" + t + "'");
    return static_cast<std::uint32_t>(it - points_.begin());
  }

  std::size_t wall_count() const { return walls_.size(); }
  const std::vector<Partition>& walls() const { return walls_; }

  /// side(w, p): false if p lies in block0 of wall w.
  bool side(std::size_t w, std::uint32_t p) const { return side_[w][p]; }

  std::size_t wall_distance(std::uint32_t u, std::uint32_t v) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < walls_.size(); ++w) n += side(w, u) != side(w, v);
    return n;
  }

  std::size_t wall_distance(const std::string& u, const std::string& v) const {
    return wall_distance(require_point(u), require_point(v));
  }

  /// Group duplicated partitions: group_of[w] indexes an arbitrary but fixed
  /// canonical ordering; rank_of[w] is w's position within its group.
  void duplicate_groups(std::vector<std::size_t>& group_of, std::vector<std::size_t>& rank_of) const {
    std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>, std::size_t> ids;
    std::vector<std::size_t> counts;
    group_of.resize(walls_.size());
    rank_of.resize(walls_.size());
    for (std::size_t w = 0; w < walls_.size(); ++w) {
      auto key = std::make_pair(walls_[w].block0, walls_[w].block1);
      auto [it, fresh] = ids.emplace(key, counts.size());
      if (fresh) counts.push_back(0);
      group_of[w] = it->second;
      rank_of[w] = counts[it->second]++;
    }
  }

 private:
  void add_wall(std::vector<std::string> a, std::vector<std::string> b) {
    if (a.empty() || b.empty()) throw WallspaceError("wall with an empty block");
    auto to_ids = [&](std::vector<std::string>& v) {
      std::vector<std::uint32_t> ids;
      for (const auto& t : v) ids.push_back(require_point(t));
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      return ids;
    };
    Partition p;
    p.block0 = to_ids(a);
    p.block1 = to_ids(b);
    for (std::uint32_t x : p.block0)
      if (std::binary_search(p.block1.begin(), p.block1.end(), x))
        throw WallspaceError("point '" + points_[x] + "' lies in both blocks");
    if (p.block0.size() + p.block1.size() != points_.size())
      throw WallspaceError("wall does not cover every point");
    if (!p.block0.empty() && !p.block1.empty() && p.block1.front() == 0)
      std::swap(p.block0, p.block1);  // block0 holds the least point
    std::vector<bool> s(points_.size(), false);
    for (std::uint32_t x : p.block1) s[x] = true;
    walls_.push_back(std::move(p));
    side_.push_back(std::move(s));
  }

  std::vector<std::string> points_;
  std::vector<Partition> walls_;
  std::vector<std::vector<bool>> side_;
};

/// The cube complex of a wallspace. Vertices are the pairwise-consistent
/// orientations reachable from the principal orientations by single-wall
/// flips; edges join orientations differing on one wall; cubes fill every
/// set of jointly flippable walls. Orientation tokens are bitstrings over
/// the wall order ('0' = block0).
struct Cubulation {
  std::shared_ptr<const CubeComplex> complex;
  std::vector<std::pair<std::string, std::string>> embedding;  // point -> vertex token
};

namespace detail {

// Consistency of choices at two walls. For distinct partitions the chosen
// blocks must intersect. Equal partitions act like parallel copies: the
// choice sequence must be monotone in the wall order (never block1 before
// block0), which keeps principal orientations at wall-distance-many flips.
struct OrientationRules {
  const Wallspace* w;
  std::vector<std::size_t> group_of, rank_of;

  explicit OrientationRules(const Wallspace& ws) : w(&ws) {
    ws.duplicate_groups(group_of, rank_of);
  }

  bool blocks_intersect(std::size_t wi, bool oi, std::size_t wj, bool oj) const {
    const auto& a = oi ? w->walls()[wi].block1 : w->walls()[wi].block0;
    const auto& b = oj ? w->walls()[wj].block1 : w->walls()[wj].block0;
    for (std::uint32_t x : a)
      if (std::binary_search(b.begin(), b.end(), x)) return true;
    return false;
  }

  bool pair_ok(std::size_t wi, bool oi, std::size_t wj, bool oj) const {
    if (group_of[wi] == group_of[wj]) {
      if (wi > wj) {
        std::swap(wi, wj);
        std::swap(oi, oj);
      }
      return !(oi && !oj);
    }
    return blocks_intersect(wi, oi, wj, oj);
  }

  bool flip_ok(const std::vector<std::uint8_t>& o, std::size_t wi) const {
    for (std::size_t wj = 0; wj < o.size(); ++wj) {
      if (wj == wi) continue;
      if (!pair_ok(wi, !o[wi], wj, o[wj])) return false;
    }
    return true;
  }
};

inline std::string orientation_token(const std::vector<std::uint8_t>& o) {
  std::string t(o.size(), '0');
  for (std::size_t i = 0; i < o.size(); ++i) t[i] = o[i] ? '1' : '0';
  return t.empty() ? "*" : t;
}

}  // namespace detail

inline Cubulation cubulate(const Wallspace& w, std::size_t wall_budget = 20) {
  if (w.wall_count() > wall_budget)
    throw BudgetError("cubulation budget: " + std::to_string(w.wall_count()) +
                      " walls exceed the cap of " + std::to_string(wall_budget));
  if (w.point_count() == 0) throw WallspaceError("empty wallspace");

  detail::OrientationRules rules(w);
  const std::size_t nw = w.wall_count();

  auto principal = [&](std::uint32_t p) {
    std::vector<std::uint8_t> o(nw);
    for (std::size_t i = 0; i < nw; ++i) o[i] = w.side(i, p) ? 1 : 0;
    return o;
  };

  std::map<std::vector<std::uint8_t>, std::uint32_t> seen;
  std::vector<std::vector<std::uint8_t>> verts;
  std::deque<std::vector<std::uint8_t>> queue;
  for (std::uint32_t p = 0; p < w.point_count(); ++p) {
    auto o = principal(p);
    if (seen.emplace(o, static_cast<std::uint32_t>(verts.size())).second) {
      verts.push_back(o);
      queue.push_back(std::move(o));
    }
  }
  while (!queue.empty()) {
    auto o = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < nw; ++i) {
      if (!rules.flip_ok(o, i)) continue;
      auto o2 = o;
      o2[i] ^= 1;
      if (seen.emplace(o2, static_cast<std::uint32_t>(verts.size())).second) {
        verts.push_back(o2);
        queue.push_back(std::move(o2));
      }
    }
  }

  // Cube records: from each orientation that sits at the all-block0 corner
  // of its cube, extend the set of jointly flippable walls.
  std::vector<std::vector<std::string>> records;
  for (const auto& o : verts) {
    records.push_back({detail::orientation_token(o)});
    std::vector<std::size_t> axes;
    std::function<void(std::size_t)> extend = [&](std::size_t from) {
      for (std::size_t i = from; i < nw; ++i) {
        if (o[i]) continue;  // canonical corner: all cube axes at block0
        bool all_in = true;
        for (std::size_t msk = 0; msk < (std::size_t{1} << axes.size()) && all_in; ++msk) {
          auto corner = o;
          for (std::size_t s = 0; s < axes.size(); ++s)
            if (msk & (std::size_t{1} << s)) corner[axes[s]] ^= 1;
          corner[i] ^= 1;
          all_in = seen.count(corner) > 0;
        }
        if (!all_in) continue;
        axes.push_back(i);
        std::vector<std::string> rec(std::size_t{1} << axes.size());
        for (std::size_t msk = 0; msk < rec.size(); ++msk) {
          auto corner = o;
          for (std::size_t s = 0; s < axes.size(); ++s)
            if (msk & (std::size_t{1} << s)) corner[axes[s]] ^= 1;
          rec[msk] = detail::orientation_token(corner);
        }
        records.push_back(std::move(rec));
        extend(i + 1);
        axes.pop_back();
      }
    };
    extend(0);
  }

  Cubulation cb;
  cb.complex = std::make_shared<CubeComplex>(CubeComplex::from_corner_lists(records));
  for (std::uint32_t p = 0; p < w.point_count(); ++p)
    cb.embedding.push_back({w.point(p), detail::orientation_token(principal(p))});
  return cb;
}

/// Extend a wall-preserving point bijection to an automorphism of the
/// cubulation. The bijection must map walls to walls block-wise; duplicate
/// walls are matched rank-for-rank within their groups.
inline Automorphism extend_automorphism(
    const Wallspace& w, const Cubulation& cb,
    const std::vector<std::pair<std::string, std::string>>& point_map) {
  const std::size_t nw = w.wall_count();
  std::vector<std::uint32_t> g(w.point_count(), 0xffffffffu);
  for (const auto& [from, to] : point_map) {
    std::uint32_t u = w.require_point(from);
    if (g[u] != 0xffffffffu) throw WallspaceError("point '" + from + "' mapped twice");
    g[u] = w.require_point(to);
  }
  std::vector<bool> hit(w.point_count(), false);
  for (std::uint32_t u = 0; u < w.point_count(); ++u) {
    if (g[u] == 0xffffffffu) throw WallspaceError("point map is not total");
    if (hit[g[u]]) throw WallspaceError("point map is not a bijection");
    hit[g[u]] = true;
  }

  // Image wall of each wall, matched by duplicate-group rank; `flip` records
  // whether g carries block0 onto the image's block1.
  std::vector<std::size_t> group_of, rank_of;
  w.duplicate_groups(group_of, rank_of);
  std::vector<std::size_t> image(nw, SIZE_MAX);
  std::vector<bool> flip(nw, false);
  for (std::size_t i = 0; i < nw; ++i) {
    std::vector<std::uint32_t> b0;
    for (std::uint32_t x : w.walls()[i].block0) b0.push_back(g[x]);
    std::sort(b0.begin(), b0.end());
    std::size_t found_group = SIZE_MAX;
    bool found_flip = false;
    for (std::size_t j = 0; j < nw; ++j) {
      if (w.walls()[j].block0 == b0) {
        found_group = group_of[j];
        found_flip = false;
        break;
      }
      if (w.walls()[j].block1 == b0) {
        found_group = group_of[j];
        found_flip = true;
        break;
      }
    }
    if (found_group == SIZE_MAX)
      throw WallspaceError("point map does not preserve wall " + std::to_string(i));
    for (std::size_t j = 0; j < nw; ++j)
      if (group_of[j] == found_group && rank_of[j] == rank_of[i]) {
        image[i] = j;
        flip[i] = found_flip;
        break;
      }
    if (image[i] == SIZE_MAX)
      throw WallspaceError("walls are not preserved with matching multiplicity");
  }

  std::vector<std::pair<std::string, std::string>> vmap;
  for (const auto& tok : cb.complex->tokens()) {
    std::string out(nw, '0');
    for (std::size_t i = 0; i < nw; ++i) {
      bool oi = tok[i] == '1';
      out[image[i]] = (oi != flip[i]) ? '1' : '0';
    }
    vmap.push_back({tok, nw == 0 ? tok : out});
  }
  return Automorphism::from_token_map(cb.complex, vmap);
}

}  // namespace ccx
