#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccx/automorphism.hpp"
#include "ccx/complex.hpp"
#include "ccx/hyperplanes.hpp"
#include "ccx/metric.hpp"

namespace ccx {

struct GeodesicFailure : Error {
  GeodesicFailure(long translate, std::uint32_t wall)
      : Error("axis concatenation repeats wall " + std::to_string(wall) + " at translate " +
              std::to_string(translate)),
        translate_power(translate),
        wall_id(wall) {}
  long translate_power;
  std::uint32_t wall_id;
};

/// Walls plus their halfspaces, computed once and reused across inversion
/// checks and classification.
struct HyperplaneData {
  WallSet ws;
  std::vector<HalfspacePair> sides;
};

inline HyperplaneData hyperplane_data(const CubeComplex& x) {
  HyperplaneData hd;
  hd.ws = walls(x);
  hd.sides.reserve(hd.ws.walls.size());
  for (const auto& w : hd.ws.walls) hd.sides.push_back(halfspaces(x, hd.ws, w));
  return hd;
}

/// First wall (by id) that f maps to itself with its halfspaces swapped.
inline std::optional<std::uint32_t> find_inversion(const CubeComplex& x, const HyperplaneData& hd,
                                                   const Automorphism& f) {
  for (const auto& w : hd.ws.walls) {
    const auto [u, v] = x.edges()[w.edges.front()];
    if (hd.ws.wall_of(x, f.apply(u), f.apply(v)) != w.id) continue;
    const HalfspacePair& hp = hd.sides[w.id];
    if (hp.side[f.apply(hp.side0.front())]) return w.id;
  }
  return std::nullopt;
}

struct StableInversionReport {
  bool clean = true;
  std::uint32_t first_power = 0;  // least power with an inversion, when !clean
  std::uint32_t wall = 0;
  std::uint32_t checked_up_to = 0;
};

/// Run find_inversion on f, f^2, ..., f^max_power. With max_power = 0 the
/// bound defaults to the order of f, which makes the check complete on
/// finite complexes.
inline StableInversionReport stable_inversion_check(const CubeComplex& x,
                                                    const HyperplaneData& hd,
                                                    const Automorphism& f,
                                                    std::uint32_t max_power = 0) {
  StableInversionReport rep;
  rep.checked_up_to = max_power == 0 ? static_cast<std::uint32_t>(f.order()) : max_power;
  Automorphism g = f;
  for (std::uint32_t k = 1; k <= rep.checked_up_to; ++k) {
    if (auto w = find_inversion(x, hd, g)) {
      rep.clean = false;
      rep.first_power = k;
      rep.wall = *w;
      return rep;
    }
    g = f.compose(g);
  }
  return rep;
}

inline std::size_t displacement(const Automorphism& f, VertexId p) {
  return distance(f.domain(), p, f.apply(p));
}

inline std::size_t displacement(const Automorphism& f, const std::string& p) {
  return displacement(f, f.domain().require_vertex(p));
}

struct TranslationLength {
  std::size_t delta = 0;
  std::string witness;
  bool exact = false;
};

/// Exact combinatorial translation length on a finite complex: minimum of
/// d(p, f(p)) over all vertices; ties go to the least token.
inline TranslationLength translation_length(const Automorphism& f) {
  const CubeComplex& x = f.domain();
  TranslationLength tl;
  tl.exact = true;
  tl.delta = SIZE_MAX;
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    std::size_t d = displacement(f, v);
    if (d < tl.delta) {
      tl.delta = d;
      tl.witness = x.token(v);
    }
  }
  return tl;
}

/// A finite window of an axis: vertices indexed -half..half with
/// f(p_i) = p_{i+period} wherever both sides lie in the window, and
/// d(p_i, p_j) = |i - j| throughout.
struct AxisWindow {
  std::vector<std::string> vertices;
  std::uint32_t period = 0;

  long half_length() const { return (static_cast<long>(vertices.size()) - 1) / 2; }
  const std::string& at(long i) const { return vertices[static_cast<std::size_t>(i + half_length())]; }
};

/// Concatenate a p -> f(p) geodesic with its f-translates into a window of
/// half-length N periods and verify it is geodesic (duplicate-free crossing
/// sequence). Throws GeodesicFailure naming the offending translate when the
/// concatenation repeats a wall: the witness was not a global minimizer, a
/// power of f has an inversion, or the window is too ambitious.
inline AxisWindow build_axis(const CubeComplex& x, const WallSet& ws, const Automorphism& f,
                             const std::string& p_token, std::uint32_t half_periods = 5) {
  VertexId p = x.require_vertex(p_token);
  const std::size_t d = displacement(f, p);
  if (d == 0) throw DomainError("build_axis: witness is a fixed vertex");

  CombinatorialPath block = least_geodesic(x, p, f.apply(p));
  const long n = static_cast<long>(half_periods);
  const long dd = static_cast<long>(d);

  AxisWindow win;
  win.period = static_cast<std::uint32_t>(d);
  win.vertices.resize(static_cast<std::size_t>(2 * n * dd + 1));

  std::vector<VertexId> base = block.vertices;  // x_0..x_d
  for (long qpow = -n; qpow <= n; ++qpow) {
    Automorphism g = f.power(qpow);
    for (long r = 0; r <= dd; ++r) {
      long k = qpow * dd + r;
      if (k < -n * dd || k > n * dd) continue;
      win.vertices[static_cast<std::size_t>(k + n * dd)] =
          x.token(g.apply(base[static_cast<std::size_t>(r)]));
    }
  }

  CombinatorialPath whole = CombinatorialPath::from_tokens(x, win.vertices);
  CrossingSequence cs = crossing_sequence(x, ws, whole);
  if (auto rep = cs.first_repeat()) {
    long step = static_cast<long>(*rep) - n * dd;  // edge index relative to p
    long translate = step >= 0 ? step / dd : (step - dd + 1) / dd;
    throw GeodesicFailure(translate, cs.walls[*rep]);
  }
  return win;
}

enum class Verdict { Elliptic, Hyperbolic, InversionFound, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Elliptic: return "elliptic";
    case Verdict::Hyperbolic: return "hyperbolic";
    case Verdict::InversionFound: return "inversion";
    default: return "indeterminate";
  }
}

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  std::string fixed_vertex;            // Elliptic
  std::size_t delta = 0;               // Hyperbolic
  std::string witness;                 // Hyperbolic / best found when indeterminate
  AxisWindow axis;                     // Hyperbolic
  std::uint32_t inversion_wall = 0;    // InversionFound
  std::uint32_t inversion_power = 0;   // InversionFound
  std::uint32_t search_radius = 0;     // Indeterminate (implicit searches)
  std::size_t best_displacement = 0;   // Indeterminate
  std::string certificate;
};

struct ClassifyParams {
  std::uint32_t max_power = 0;     // 0 = order of f (complete on finite complexes)
  std::uint32_t window = 5;        // axis half-length in periods
};

/// Classify an automorphism of a finite validated cubing. An inversion at
/// any checked power takes precedence over ellipticity; a fixed vertex both
/// exists and is reported in the certificate in that case. On a finite
/// cubing a stably-inversion-free automorphism must come out Elliptic; the
/// Hyperbolic/Indeterminate branches exist for the sake of honest reporting
/// on inputs that break the preconditions.
inline Classification classify(const CubeComplex& x, const HyperplaneData& hd,
                               const Automorphism& f, const ClassifyParams& params = {}) {
  Classification c;

  std::optional<VertexId> fixed;
  for (VertexId v = 0; v < x.vertex_count(); ++v)
    if (f.apply(v) == v) {
      fixed = v;
      break;
    }

  StableInversionReport inv = stable_inversion_check(x, hd, f, params.max_power);
  if (!inv.clean) {
    c.verdict = Verdict::InversionFound;
    c.inversion_wall = inv.wall;
    c.inversion_power = inv.first_power;
    c.certificate = "inversion along wall " + std::to_string(inv.wall) + " at power " +
                    std::to_string(inv.first_power);
    if (fixed) c.certificate += "; a fixed vertex exists (" + x.token(*fixed) + ")";
    return c;
  }

  if (fixed) {
    c.verdict = Verdict::Elliptic;
    c.fixed_vertex = x.token(*fixed);
    c.certificate = "fixed vertex " + c.fixed_vertex + "; no inversion up to power " +
                    std::to_string(inv.checked_up_to);
    return c;
  }

  TranslationLength tl = translation_length(f);
  c.witness = tl.witness;
  c.best_displacement = tl.delta;
  try {
    c.axis = build_axis(x, hd.ws, f, tl.witness, params.window);
    c.verdict = Verdict::Hyperbolic;
    c.delta = tl.delta;
    c.certificate = "axis window of " + std::to_string(c.axis.vertices.size()) +
                    " vertices through " + tl.witness + ", translation " + std::to_string(tl.delta);
  } catch (const GeodesicFailure& gf) {
    c.verdict = Verdict::Indeterminate;
    c.certificate = std::string("no fixed vertex and no axis: ") + gf.what();
  }
  return c;
}

/// Two sides of the decomposition inequality delta(f) <= sum delta(s_i).
struct SubadditivityCheck {
  std::size_t delta_f = 0;
  std::vector<std::size_t> parts;
  std::size_t sum = 0;
  bool ok = false;
};

/// Outcome of restricting an automorphism to an invariant geodesic: exactly
/// one of a fixed point on it, a swap of two consecutive vertices, or a
/// nonzero translation (in which case the translation length of f is |d|).
struct GeodesicTrichotomy {
  enum class Kind { FixedPoint, AdjacentSwap, Translation };
  Kind kind = Kind::FixedPoint;
  std::string fixed_vertex;
  std::pair<std::string, std::string> swapped_edge;
  long shift = 0;
  std::string note;
};

/// `window` is a geodesic (consecutive vertices adjacent, d(p_i,p_j)=|i-j|)
/// mapped into itself by f; `f` may be partial (nullopt outside its region).
inline GeodesicTrichotomy classify_on_invariant_geodesic(
    const std::vector<std::string>& window,
    const std::function<std::optional<std::string>(const std::string&)>& f) {
  const long n = static_cast<long>(window.size());
  std::unordered_map<std::string, long> pos;
  for (long i = 0; i < n; ++i) pos.emplace(window[static_cast<std::size_t>(i)], i);

  // Recover the induced index map phi(i) = d + eps*i from mapped vertices.
  std::vector<std::pair<long, long>> mapped;
  for (long i = 0; i < n; ++i) {
    auto img = f(window[static_cast<std::size_t>(i)]);
    if (!img) continue;
    auto it = pos.find(*img);
    if (it == pos.end()) continue;
    mapped.push_back({i, it->second});
  }
  if (mapped.size() < 2)
    throw DomainError("window too short to determine the induced index map");
  long eps = 0, d = 0;
  bool have = false;
  for (std::size_t a = 0; a + 1 < mapped.size(); ++a) {
    if (mapped[a + 1].first != mapped[a].first + 1) continue;
    long e = mapped[a + 1].second - mapped[a].second;
    if (e != 1 && e != -1)
      throw DomainError("window is not invariant: image indices jump by " + std::to_string(e));
    eps = e;
    d = mapped[a].second - eps * mapped[a].first;
    have = true;
    break;
  }
  if (!have) throw DomainError("window too short to determine the induced index map");
  for (auto [i, j] : mapped)
    if (j != d + eps * i)
      throw DomainError("window is not invariant: images do not follow one affine index map");

  GeodesicTrichotomy out;
  if (eps == -1) {
    if (d % 2 == 0) {
      long mid = d / 2;
      if (mid < 0 || mid >= n)
        throw DomainError("window too short: the reflection center lies outside");
      out.kind = GeodesicTrichotomy::Kind::FixedPoint;
      out.fixed_vertex = window[static_cast<std::size_t>(mid)];
      out.note = "orientation-reversing with even offset";
    } else {
      long lo = (d - 1) / 2;
      if (lo < 0 || lo + 1 >= n)
        throw DomainError("window too short: the swapped edge lies outside");
      out.kind = GeodesicTrichotomy::Kind::AdjacentSwap;
      out.swapped_edge = {window[static_cast<std::size_t>(lo)],
                          window[static_cast<std::size_t>(lo + 1)]};
      out.note = "orientation-reversing with odd offset";
    }
    return out;
  }
  if (d == 0) {
    out.kind = GeodesicTrichotomy::Kind::FixedPoint;
    out.fixed_vertex = window[window.size() / 2];
    out.note = "pointwise fixed";
    return out;
  }
  out.kind = GeodesicTrichotomy::Kind::Translation;
  out.shift = d;
  out.note = "translation; every window vertex is displaced by exactly " +
             std::to_string(std::abs(d)) + ", so the translation length is " +
             std::to_string(std::abs(d));
  return out;
}

/// Axis relocation toward a vertex p: while some forward subpath from the
/// window vertex closest to p fails to extend a p-geodesic, reflect the
/// offending segment through the carrier of the doubled wall and re-close by
/// f-periodicity. The result satisfies d(p, q_{n+k}) = d(p, q_n) + k forward
/// of the closest index n. The complex is the materialized geometry (a
/// finite complex, or a ball of an implicit one); f acts through tokens so
/// both cases share the loop.
inline AxisWindow relocate_axis_on(
    const CubeComplex& x, const WallSet& ws,
    const std::function<std::optional<std::string>(long, const std::string&)>& apply_f,
    AxisWindow axis, const std::string& p_token) {
  VertexId p = x.require_vertex(p_token);
  const long d = static_cast<long>(axis.period);
  const long half = axis.half_length();

  auto rebuild = [&](long b, const std::vector<std::string>& block) {
    // Re-extend the block q_b..q_{b+d} over the full index range by
    // f-translates.
    AxisWindow out;
    out.period = axis.period;
    out.vertices.resize(axis.vertices.size());
    for (long k = -half; k <= half; ++k) {
      long rel = k - b;
      long qpow = rel >= 0 ? rel / d : (rel - d + 1) / d;
      long r = rel - qpow * d;
      auto v = apply_f(qpow, block[static_cast<std::size_t>(r)]);
      if (!v) throw Error("axis relocation left the region of definition");
      out.vertices[static_cast<std::size_t>(k + half)] = *v;
    }
    return out;
  };

  const std::size_t cap = 4 * axis.vertices.size() + 16;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    std::vector<VertexId> q(axis.vertices.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = x.require_vertex(axis.vertices[i]);

    auto dp = distances_from(x, p);
    long nbest = -half;
    for (long k = -half; k <= half; ++k)
      if (dp[q[static_cast<std::size_t>(k + half)]] <=
          dp[q[static_cast<std::size_t>(nbest + half)]])
        nbest = k;  // last minimizer

    std::optional<long> violation;
    const std::size_t dn = dp[q[static_cast<std::size_t>(nbest + half)]];
    for (long m = nbest + 1; m <= half; ++m) {
      if (dp[q[static_cast<std::size_t>(m + half)]] != dn + static_cast<std::size_t>(m - nbest)) {
        violation = m;
        break;
      }
    }
    if (!violation) {
      CombinatorialPath whole = CombinatorialPath::from_tokens(x, axis.vertices);
      CrossingSequence cs = crossing_sequence(x, ws, whole);
      if (auto rep = cs.first_repeat())
        throw GeodesicFailure(static_cast<long>(*rep) / d, cs.walls[*rep]);
      return axis;
    }

    const long m = *violation;
    const long b = std::max(nbest, m - d);
    if (b >= m - 1)
      throw Error("axis relocation made no progress (is the input a cubing and f stably "
                  "inversion-free?)");

    // The doubled wall is dual to the axis edge entering the violating index.
    const std::uint32_t wall_id =
        ws.wall_of(x, q[static_cast<std::size_t>(m - 1 + half)],
                   q[static_cast<std::size_t>(m + half)]);
    Carrier car = carrier(x, ws, ws.walls[wall_id]);
    Automorphism sigma = reflection(car);

    std::vector<std::string> block(static_cast<std::size_t>(d + 1));
    block[0] = axis.vertices[static_cast<std::size_t>(b + half)];
    for (long i = b; i < m; ++i) {
      const std::string& tok = axis.vertices[static_cast<std::size_t>(i + half)];
      if (!car.complex->find_vertex(tok))
        throw Error("reflection surgery left the carrier of wall " + std::to_string(wall_id));
      block[static_cast<std::size_t>(i - b + 1)] = sigma.apply_token(tok);
    }
    for (long i = m + 1; i <= b + d; ++i)
      block[static_cast<std::size_t>(i - b)] = axis.vertices[static_cast<std::size_t>(i + half)];

    axis = rebuild(b, block);
  }
  throw Error("axis relocation did not converge");
}

inline AxisWindow relocate_axis(const CubeComplex& x, const HyperplaneData& hd,
                                const Automorphism& f, AxisWindow axis,
                                const std::string& p_token) {
  auto apply_f = [&](long n, const std::string& t) -> std::optional<std::string> {
    return x.token(f.power(n).apply(x.require_vertex(t)));
  };
  return relocate_axis_on(x, hd.ws, apply_f, std::move(axis), p_token);
}

}  // namespace ccx
