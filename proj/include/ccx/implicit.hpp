#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ccx/classify.hpp"
#include "ccx/complex.hpp"

namespace ccx {

struct RegionError : Error {
  using Error::Error;
};

/// A generator-style infinite complex, materialized as balls. neighbors()
/// enumerates the edges at a vertex; cubes_at() enumerates cubes containing
/// the vertex whose corners all pass the filter (over all vertices of a set
/// these must cover every cube spanned by the set; duplicates are fine).
struct ImplicitComplex {
  std::string name;
  std::string seed;
  std::function<std::vector<std::string>(const std::string&)> neighbors;
  std::function<std::vector<std::vector<std::string>>(
      const std::string&, const std::function<bool(const std::string&)>&)>
      cubes_at;
};

/// A partial automorphism of an implicit complex: token-level forward and
/// backward maps, nullopt where the image leaves the declared region.
struct ImplicitMap {
  std::string name;
  std::function<std::optional<std::string>(const std::string&)> fwd, bwd;
};

inline std::optional<std::string> apply_power(const ImplicitMap& f, long n,
                                              const std::string& v) {
  std::optional<std::string> cur = v;
  const auto& step = n >= 0 ? f.fwd : f.bwd;
  for (long i = 0; i < (n >= 0 ? n : -n) && cur; ++i) cur = step(*cur);
  return cur;
}

inline ImplicitMap compose(const ImplicitMap& f, const ImplicitMap& g) {
  // (f after g)
  return ImplicitMap{
      f.name + "*" + g.name,
      [f, g](const std::string& v) -> std::optional<std::string> {
        auto m = g.fwd(v);
        return m ? f.fwd(*m) : std::nullopt;
      },
      [f, g](const std::string& v) -> std::optional<std::string> {
        auto m = f.bwd(v);
        return m ? g.bwd(*m) : std::nullopt;
      }};
}

inline ImplicitMap implicit_power(const ImplicitMap& f, long n) {
  return ImplicitMap{f.name + "^" + std::to_string(n),
                     [f, n](const std::string& v) { return apply_power(f, n, v); },
                     [f, n](const std::string& v) { return apply_power(f, -n, v); }};
}

/// The ball of radius r around a center, as an indexed graph: tokens,
/// BFS distances from the center, and integer adjacency restricted to the
/// ball. Exceeding the vertex budget is an error, never silent truncation.
struct Region {
  std::vector<std::string> order;  // sorted tokens
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::uint32_t> center_dist;
  std::uint32_t radius = 0;

  bool contains(const std::string& t) const { return index.count(t) > 0; }
};

inline Region materialize_region(const ImplicitComplex& ic, const std::string& center,
                                 std::uint32_t radius, std::size_t vertex_budget = 100000) {
  std::unordered_map<std::string, std::uint32_t> dist;
  dist.emplace(center, 0);
  std::deque<std::string> queue{center};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    std::uint32_t du = dist[u];
    if (du == radius) continue;
    for (const auto& v : ic.neighbors(u)) {
      if (dist.count(v)) continue;
      if (dist.size() >= vertex_budget)
        throw BudgetError("ball of radius " + std::to_string(radius) + " around " + center +
                          " exceeds the vertex budget of " + std::to_string(vertex_budget));
      dist.emplace(v, du + 1);
      queue.push_back(v);
    }
  }

  Region r;
  r.radius = radius;
  r.order.reserve(dist.size());
  for (const auto& [t, d] : dist) r.order.push_back(t);
  std::sort(r.order.begin(), r.order.end());
  for (std::uint32_t i = 0; i < r.order.size(); ++i) r.index.emplace(r.order[i], i);
  r.center_dist.resize(r.order.size());
  r.adj.resize(r.order.size());
  for (std::uint32_t i = 0; i < r.order.size(); ++i) {
    r.center_dist[i] = dist[r.order[i]];
    for (const auto& v : ic.neighbors(r.order[i])) {
      auto it = r.index.find(v);
      if (it != r.index.end()) r.adj[i].push_back(it->second);
    }
    std::sort(r.adj[i].begin(), r.adj[i].end());
  }
  return r;
}

/// BFS distance inside the region; nullopt when not connected within it.
/// `cap` bounds the search depth (useful when only small distances matter).
inline std::optional<std::uint32_t> region_distance(const Region& r, std::uint32_t u,
                                                    std::uint32_t v,
                                                    std::uint32_t cap = 0xffffffffu) {
  if (u == v) return 0;
  std::vector<std::uint32_t> d(r.order.size(), 0xffffffffu);
  std::deque<std::uint32_t> q{u};
  d[u] = 0;
  while (!q.empty()) {
    std::uint32_t a = q.front();
    q.pop_front();
    if (d[a] >= cap) continue;
    for (std::uint32_t b : r.adj[a]) {
      if (d[b] != 0xffffffffu) continue;
      d[b] = d[a] + 1;
      if (b == v) return d[b];
      q.push_back(b);
    }
  }
  return std::nullopt;
}

inline std::vector<std::uint32_t> region_distances_from(const Region& r, std::uint32_t src) {
  std::vector<std::uint32_t> d(r.order.size(), 0xffffffffu);
  std::deque<std::uint32_t> q{src};
  d[src] = 0;
  while (!q.empty()) {
    std::uint32_t a = q.front();
    q.pop_front();
    for (std::uint32_t b : r.adj[a])
      if (d[b] == 0xffffffffu) {
        d[b] = d[a] + 1;
        q.push_back(b);
      }
  }
  return d;
}

/// Materialize the full subcomplex spanned by the ball: its vertices plus
/// every cube of the implicit complex with all corners inside.
inline CubeComplex ball(const ImplicitComplex& ic, const std::string& center,
                        std::uint32_t radius, std::size_t vertex_budget = 100000) {
  Region r = materialize_region(ic, center, radius, vertex_budget);
  auto inside = [&](const std::string& t) { return r.contains(t); };
  std::vector<std::vector<std::string>> records;
  for (const auto& t : r.order) {
    records.push_back({t});  // keep isolated vertices
    for (auto& rec : ic.cubes_at(t, inside)) records.push_back(std::move(rec));
  }
  return CubeComplex::from_corner_lists(records);
}

struct ImplicitClassifyParams {
  std::uint32_t radius = 4;            // materialization / search radius
  std::uint32_t window = 5;            // axis half-length in periods
  std::uint32_t max_power = 4;         // stable inversion powers
  std::uint32_t inversion_radius = 2;  // sub-ball whose walls form the inversion scope
  std::uint32_t scan_radius = 2;       // displacement-minimizer scan
  std::size_t vertex_budget = 100000;
};

namespace detail {

// Build the f-translate window through `witness` (displacement `delta`) and
// verify it pairwise: every vertex materialized and d(q_i, q_j) = |i - j|.
// On failure returns a diagnostic instead of a window.
inline std::pair<std::optional<AxisWindow>, std::string> try_axis_window(
    const Region& region, const ImplicitMap& f, const std::string& witness, std::size_t delta,
    std::uint32_t half_periods) {
  const long d = static_cast<long>(delta);
  const long n = static_cast<long>(half_periods);
  AxisWindow win;
  win.period = static_cast<std::uint32_t>(delta);
  win.vertices.resize(static_cast<std::size_t>(2 * n * d + 1));

  // Geodesic block p -> f(p) inside the region, then f-translates.
  auto img = f.fwd(witness);
  if (!img || !region.contains(witness) || !region.contains(*img))
    return {std::nullopt, "witness or its image is not materialized"};
  std::uint32_t pw = region.index.at(witness);
  std::uint32_t fw = region.index.at(*img);
  auto dist_to = region_distances_from(region, fw);
  std::vector<std::string> block{witness};
  std::uint32_t cur = pw;
  while (cur != fw) {
    for (std::uint32_t nb : region.adj[cur])
      if (dist_to[nb] + 1 == dist_to[cur]) {
        cur = nb;
        break;
      }
    block.push_back(region.order[cur]);
  }
  if (block.size() != delta + 1)
    return {std::nullopt, "witness displacement does not match the period"};

  for (long qpow = -n; qpow <= n; ++qpow) {
    for (long rr = 0; rr <= d; ++rr) {
      long k = qpow * d + rr;
      if (k < -n * d || k > n * d) continue;
      auto v = apply_power(f, qpow, block[static_cast<std::size_t>(rr)]);
      if (!v)
        return {std::nullopt, "axis window through " + witness +
                                  " leaves the region of definition of " + f.name};
      win.vertices[static_cast<std::size_t>(k + n * d)] = *v;
    }
  }

  std::vector<std::uint32_t> widx(win.vertices.size());
  for (std::size_t i = 0; i < win.vertices.size(); ++i) {
    auto it = region.index.find(win.vertices[i]);
    if (it == region.index.end())
      return {std::nullopt, "axis window through " + witness +
                                " leaves the materialized ball (radius " +
                                std::to_string(region.radius) + ")"};
    widx[i] = it->second;
  }
  for (std::size_t i = 0; i < widx.size(); ++i) {
    auto di = region_distances_from(region, widx[i]);
    for (std::size_t j = 0; j < widx.size(); ++j) {
      if (di[widx[j]] != (i > j ? i - j : j - i))
        return {std::nullopt, "window through " + witness +
                                  " failed the geodesic condition at offsets " +
                                  std::to_string(static_cast<long>(i) - n * d) + ", " +
                                  std::to_string(static_cast<long>(j) - n * d)};
    }
  }
  return {std::move(win), ""};
}

// Scope-limited inversion check: walls of the materialized sub-ball whose
// edge images under f^k stay inside it. Returns the wall id and power, or
// nothing. `unanalyzable` counts walls that could not be decided in scope.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> find_inversion_in_scope(
    const CubeComplex& sub, const WallSet& ws, const ImplicitMap& f, std::uint32_t max_power,
    std::size_t& unanalyzable) {
  for (std::uint32_t k = 1; k <= max_power; ++k) {
    for (const auto& w : ws.walls) {
      bool decided = false;
      for (std::uint32_t e : w.edges) {
        const auto [u, v] = sub.edges()[e];
        auto fu = apply_power(f, k, sub.token(u));
        auto fv = apply_power(f, k, sub.token(v));
        if (!fu || !fv) continue;  // this edge's image is out of reach, try another
        auto iu = sub.find_vertex(*fu);
        auto iv = sub.find_vertex(*fv);
        if (!iu || !iv || !sub.edge_index(*iu, *iv)) continue;
        if (ws.wall_of(sub, *iu, *iv) != w.id) {
          decided = true;  // the wall moves somewhere else
          break;
        }
        // Image edge lies in the same wall; inverted iff the endpoints swap
        // sides, i.e. f^k(u) is on v's side of the wall.
        try {
          HalfspacePair hp = halfspaces(sub, ws, w);
          decided = true;
          if (hp.side[*iu] != hp.side[u]) return std::make_pair(w.id, k);
        } catch (const SeparationFailure&) {
          // sub-ball walls need not separate a non-convex ball
        }
        break;
      }
      if (!decided) ++unanalyzable;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Classify a (partial) automorphism of an implicit complex on a materialized
/// ball around the seed. Exactness of a Hyperbolic verdict rests on the axis
/// certificate: a window-verified invariant geodesic of translation d forces
/// every displacement to be at least d. Without a fixed point or such a
/// certificate the verdict is Indeterminate, carrying the search evidence.
/// A prebuilt region for the same seed and radius may be supplied.
inline Classification classify_implicit(const ImplicitComplex& ic, const ImplicitMap& f,
                                        const ImplicitClassifyParams& params = {},
                                        const Region* prebuilt = nullptr) {
  Classification c;
  c.search_radius = params.radius;
  Region local;
  if (!(prebuilt && prebuilt->radius == params.radius))
    local = materialize_region(ic, ic.seed, params.radius, params.vertex_budget);
  const Region& region = prebuilt && prebuilt->radius == params.radius ? *prebuilt : local;

  // (i) inversions, in scope
  std::size_t unanalyzable = 0;
  {
    CubeComplex sub = ball(ic, ic.seed, std::min(params.inversion_radius, params.radius),
                           params.vertex_budget);
    WallSet ws = walls(sub);
    if (auto inv = detail::find_inversion_in_scope(sub, ws, f, params.max_power, unanalyzable)) {
      c.verdict = Verdict::InversionFound;
      c.inversion_wall = inv->first;
      c.inversion_power = inv->second;
      c.certificate = "inversion along wall " + std::to_string(inv->first) + " at power " +
                      std::to_string(inv->second) + " (scope: ball of radius " +
                      std::to_string(params.inversion_radius) + ")";
      return c;
    }
  }

  // (ii) fixed vertex in the searched ball
  for (const auto& t : region.order) {
    auto img = f.fwd(t);
    if (img && *img == t) {
      c.verdict = Verdict::Elliptic;
      c.fixed_vertex = t;
      c.certificate = "fixed vertex " + t + "; no inversion found in scope for powers up to " +
                      std::to_string(params.max_power);
      return c;
    }
  }

  // (iii) minimizer scan: all witnesses of least displacement, least tokens first
  std::size_t best = SIZE_MAX;
  std::vector<std::string> candidates;
  for (const auto& t : region.order) {
    if (region.center_dist[region.index.at(t)] > params.scan_radius) continue;
    auto img = f.fwd(t);
    if (!img || !region.contains(*img)) continue;
    std::uint32_t capv = best == SIZE_MAX ? 0xffffffffu : static_cast<std::uint32_t>(best);
    auto d = region_distance(region, region.index.at(t), region.index.at(*img), capv);
    if (!d) continue;
    if (*d < best) {
      best = *d;
      candidates.assign(1, t);
    } else if (*d == best) {
      candidates.push_back(t);
    }
  }
  c.best_displacement = best == SIZE_MAX ? 0 : best;
  if (candidates.empty()) {
    c.certificate = "no vertex of the scan ball has its image inside the search ball";
    return c;
  }
  c.witness = candidates.front();

  // (iv) axis certificate: try each minimizer until a window through it is
  // fully materialized and verified as a geodesic, d(q_i, q_j) = |i - j|.
  std::string failure = "no axis attempt was made";
  for (const auto& witness : candidates) {
    auto [win, why] = detail::try_axis_window(region, f, witness, best, params.window);
    if (!win) {
      failure = why;
      continue;
    }
    c.verdict = Verdict::Hyperbolic;
    c.delta = best;
    c.witness = witness;
    c.axis = *win;
    c.certificate = "invariant geodesic window of " + std::to_string(c.axis.vertices.size()) +
                    " vertices through " + witness + " with translation " + std::to_string(best) +
                    ", verified by pairwise ball distances; every displacement is therefore >= " +
                    std::to_string(best);
    if (unanalyzable > 0)
      c.certificate += " (" + std::to_string(unanalyzable) + " wall/power pairs left scope)";
    return c;
  }
  c.certificate = failure;
  return c;
}

/// Build and verify an axis window of half-length `half_periods` periods
/// through p on an implicit complex, with the period taken from d(p, f(p))
/// within the ball. Throws on any verification failure; the certificate is
/// the pairwise distance identity over the window.
inline AxisWindow build_axis_implicit(const ImplicitComplex& ic, const ImplicitMap& f,
                                      const std::string& p, std::uint32_t half_periods,
                                      const ImplicitClassifyParams& params = {},
                                      const Region* prebuilt = nullptr) {
  Region local;
  if (!(prebuilt && prebuilt->radius == params.radius))
    local = materialize_region(ic, ic.seed, params.radius, params.vertex_budget);
  const Region& region = prebuilt && prebuilt->radius == params.radius ? *prebuilt : local;
  auto img = f.fwd(p);
  if (!img || !region.contains(p) || !region.contains(*img))
    throw RegionError("p or f(p) is not materialized");
  auto d = region_distance(region, region.index.at(p), region.index.at(*img));
  if (!d) throw RegionError("p and f(p) are not connected within the ball");
  if (*d == 0) throw DomainError("build_axis: witness is a fixed vertex");
  auto [win, why] = detail::try_axis_window(region, f, p, *d, half_periods);
  if (!win) throw Error(why);
  return *win;
}

/// Relocation on an implicit complex: the surgery runs on a materialized
/// ball around the seed (which must contain the window, p, and the carriers
/// touched by the surgery).
inline AxisWindow relocate_axis_implicit(const ImplicitComplex& ic, const ImplicitMap& f,
                                         AxisWindow axis, const std::string& p_token,
                                         std::uint32_t radius,
                                         std::size_t vertex_budget = 100000) {
  CubeComplex x = ball(ic, ic.seed, radius, vertex_budget);
  WallSet ws = walls(x);
  auto apply_f = [&f](long n, const std::string& t) { return apply_power(f, n, t); };
  return relocate_axis_on(x, ws, apply_f, std::move(axis), p_token);
}

/// delta(f) <= sum of delta(s_i) for implicit maps, with lengths certified
/// by classification (0 for elliptic, axis-certified otherwise). The
/// composition is checked against f on every ball vertex.
inline SubadditivityCheck delta_subadditivity_implicit(const ImplicitComplex& ic,
                                                       const ImplicitMap& f,
                                                       const std::vector<ImplicitMap>& word,
                                                       const ImplicitClassifyParams& params = {}) {
  if (word.empty()) throw DomainError("empty decomposition");
  Region region = materialize_region(ic, ic.seed, params.radius, params.vertex_budget);
  ImplicitMap prod = word.back();
  for (std::size_t i = word.size() - 1; i-- > 0;) prod = compose(word[i], prod);
  for (const auto& t : region.order) {
    auto a = prod.fwd(t), b = f.fwd(t);
    if (a && b && *a != *b)
      throw DomainError("composition mismatch at vertex " + t);
  }

  auto certified_delta = [&](const ImplicitMap& g) -> std::size_t {
    Classification c = classify_implicit(ic, g, params, &region);
    if (c.verdict == Verdict::Elliptic) return 0;
    if (c.verdict == Verdict::Hyperbolic) return c.delta;
    throw DomainError("translation length of " + g.name + " not certified: " + c.certificate);
  };

  SubadditivityCheck rep;
  rep.delta_f = certified_delta(f);
  for (const auto& s : word) {
    rep.parts.push_back(certified_delta(s));
    rep.sum += rep.parts.back();
  }
  rep.ok = rep.delta_f <= rep.sum;
  return rep;
}

struct PowerLengthEntry {
  std::uint32_t power = 0;
  std::size_t delta = 0;
  bool certified = false;
  std::string note;
};

struct PowerLengthReport {
  bool ok = true;
  std::vector<PowerLengthEntry> entries;
};

/// Verify delta(f^n) = n * delta(f) for n = 1..n_max, reusing f's axis: the
/// same window is an invariant geodesic for f^n with translation n*d.
/// Requires a Hyperbolic classification for f.
inline PowerLengthReport power_length_check(const ImplicitComplex& ic, const ImplicitMap& f,
                                            const Classification& base, std::uint32_t n_max,
                                            const ImplicitClassifyParams& params = {},
                                            const Region* prebuilt = nullptr) {
  if (base.verdict != Verdict::Hyperbolic)
    throw DomainError("power_length_check requires a hyperbolic classification");
  PowerLengthReport rep;
  Region local;
  if (!(prebuilt && prebuilt->radius == params.radius))
    local = materialize_region(ic, ic.seed, params.radius, params.vertex_budget);
  const Region& region = prebuilt && prebuilt->radius == params.radius ? *prebuilt : local;
  const long d = static_cast<long>(base.delta);
  const long half = base.axis.half_length();
  for (std::uint32_t k = 1; k <= n_max; ++k) {
    PowerLengthEntry e;
    e.power = k;
    // f^k translates the window by k*d.
    bool shifts = true;
    std::size_t checked = 0;
    for (long i = -half; i + static_cast<long>(k) * d <= half && shifts; ++i) {
      auto img = apply_power(f, k, base.axis.at(i));
      shifts = img && *img == base.axis.at(i + static_cast<long>(k) * d);
      ++checked;
    }
    if (checked == 0) shifts = false;
    // Displacement of the axis base vertex under f^k.
    auto p0 = base.axis.at(0);
    auto pk = apply_power(f, k, p0);
    std::optional<std::uint32_t> disp;
    if (pk && region.contains(p0) && region.contains(*pk))
      disp = region_distance(region, region.index.at(p0), region.index.at(*pk));
    if (!shifts || !disp) {
      e.certified = false;
      e.note = "window or region too small for power " + std::to_string(k);
      rep.ok = false;
    } else {
      e.delta = *disp;
      e.certified = (*disp == k * base.delta);
      if (!e.certified) {
        e.note = "axis displacement " + std::to_string(*disp) + " != " +
                 std::to_string(k * base.delta);
        rep.ok = false;
      } else {
        e.note = "axis of f is an axis of f^" + std::to_string(k) + ", translation " +
                 std::to_string(*disp);
      }
    }
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace ccx
