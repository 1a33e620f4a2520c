#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/classify.hpp"
#include "ccx/implicit.hpp"

namespace ccx {
namespace l2 {

// Vertices of the standard cubulation of integer sequences with support in
// [-K, K]: sparse index -> value maps. Token: "idx:val,..." sorted by index,
// "0" for the origin.
using Vec = std::map<int, int>;

inline std::string format(const Vec& v) {
  if (v.empty()) return "0";
  std::string out;
  for (const auto& [k, x] : v) {
    if (!out.empty()) out += ",";
    out += std::to_string(k) + ":" + std::to_string(x);
  }
  return out;
}

inline Vec parse(const std::string& t) {
  Vec v;
  if (t == "0") return v;
  std::istringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    v[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
  }
  return v;
}

inline void add_unit(Vec& v, int k, int s) {
  int& x = v[k];
  x += s;
  if (x == 0) v.erase(k);
}

inline ImplicitComplex complex(int window) {
  ImplicitComplex ic;
  ic.name = "l2-window-" + std::to_string(window);
  ic.seed = "0";
  ic.neighbors = [window](const std::string& t) {
    Vec v = parse(t);
    std::vector<std::string> out;
    for (int k = -window; k <= window; ++k)
      for (int s : {+1, -1}) {
        Vec u = v;
        add_unit(u, k, s);
        out.push_back(format(u));
      }
    return out;
  };
  ic.cubes_at = [window](const std::string& t,
                         const std::function<bool(const std::string&)>& keep) {
    // Cubes with t as coordinatewise-minimal corner: choose an axis set S,
    // corners = t plus sums of unit vectors over subsets of S.
    Vec base = parse(t);
    std::vector<std::vector<std::string>> records;
    std::vector<int> axes;
    std::vector<Vec> corners{base};
    std::function<void(int)> extend = [&](int from) {
      for (int k = from; k <= window; ++k) {
        std::vector<Vec> grown;
        bool ok = true;
        for (const auto& c : corners) {
          Vec c2 = c;
          add_unit(c2, k, +1);
          if (!keep(format(c2))) {
            ok = false;
            break;
          }
          grown.push_back(std::move(c2));
        }
        if (!ok) continue;
        axes.push_back(k);
        std::vector<Vec> all = corners;
        all.insert(all.end(), grown.begin(), grown.end());
        std::vector<std::string> rec;
        rec.reserve(all.size());
        for (const auto& c : all) rec.push_back(format(c));
        records.push_back(std::move(rec));
        corners.swap(all);
        extend(k + 1);
        corners.resize(corners.size() / 2);  // drop the grown half
        axes.pop_back();
      }
    };
    if (keep(t)) extend(-window);
    return records;
  };
  return ic;
}

/// The affine map u -> shift(u) + e0 where shift moves coordinate k to k+1.
/// Partial: images with support outside [-K, K] are out of region.
inline ImplicitMap shift_add(int window) {
  ImplicitMap f;
  f.name = "shift-add-e0";
  f.fwd = [window](const std::string& t) -> std::optional<std::string> {
    Vec v = parse(t), u;
    for (const auto& [k, x] : v) {
      if (k + 1 > window) return std::nullopt;
      u[k + 1] = x;
    }
    add_unit(u, 0, +1);
    return format(u);
  };
  f.bwd = [window](const std::string& t) -> std::optional<std::string> {
    Vec v = parse(t), u;
    add_unit(v, 0, -1);
    for (const auto& [k, x] : v) {
      if (k - 1 < -window) return std::nullopt;
      u[k - 1] = x;
    }
    return format(u);
  };
  return f;
}

}  // namespace l2

namespace bs {

// Bass-Serre tree of BS(m,n) = <a, b | b a^m b^-1 = a^n>, as cosets w<a>
// in canonical alternating form: units a^j b^eps with j in [0, n) when
// eps = +1 and [0, m) when eps = -1, no unit (0, -eps) directly after a unit
// of sign eps. Token "e" is the base vertex <a>; units are "p<j>" / "m<j>"
// joined by dots.
struct Unit {
  long j = 0;
  int eps = +1;
};

inline std::string format(const std::vector<Unit>& w) {
  if (w.empty()) return "e";
  std::string out;
  for (const auto& u : w) {
    if (!out.empty()) out += ".";
    out += (u.eps > 0 ? "p" : "m") + std::to_string(u.j);
  }
  return out;
}

inline std::vector<Unit> parse(const std::string& t) {
  std::vector<Unit> w;
  if (t == "e") return w;
  std::istringstream in(t);
  std::string item;
  while (std::getline(in, item, '.'))
    w.push_back({std::stol(item.substr(1)), item[0] == 'p' ? +1 : -1});
  return w;
}

/// Left multiplication by a^s (s = +-1): a carry ripples down the word.
/// Because the carry entering a unit of opposite sign is a multiple of that
/// unit's modulus, no unit cancellation can occur.
inline std::vector<Unit> act_a(std::vector<Unit> w, long s, long m, long n) {
  long carry = s;
  for (std::size_t i = 0; i < w.size() && carry != 0; ++i) {
    const long modulus = w[i].eps > 0 ? n : m;
    const long emitted = w[i].eps > 0 ? m : n;
    long t = w[i].j + carry;
    long nj = ((t % modulus) + modulus) % modulus;
    carry = (t - nj) / modulus * emitted;
    w[i].j = nj;
  }
  for (std::size_t i = 1; i < w.size(); ++i)
    assert(!(w[i].j == 0 && w[i].eps == -w[i - 1].eps));
  return w;
}

/// Left multiplication by b^s: prepend or cancel the leading unit.
inline std::vector<Unit> act_b(std::vector<Unit> w, int s) {
  if (!w.empty() && w.front().eps == -s && w.front().j == 0) {
    w.erase(w.begin());
    return w;
  }
  w.insert(w.begin(), Unit{0, s});
  return w;
}

inline ImplicitComplex tree(long m, long n) {
  ImplicitComplex ic;
  ic.name = "bass-serre-" + std::to_string(m) + "-" + std::to_string(n);
  ic.seed = "e";
  ic.neighbors = [m, n](const std::string& t) {
    std::vector<Unit> w = parse(t);
    std::vector<std::string> out;
    if (!w.empty()) {
      auto parent = w;
      parent.pop_back();
      out.push_back(format(parent));
    }
    const int last_eps = w.empty() ? 0 : w.back().eps;
    for (long j = 0; j < n; ++j) {
      if (j == 0 && last_eps == -1) continue;  // that move is the parent
      auto child = w;
      child.push_back({j, +1});
      out.push_back(format(child));
    }
    for (long j = 0; j < m; ++j) {
      if (j == 0 && last_eps == +1) continue;
      auto child = w;
      child.push_back({j, -1});
      out.push_back(format(child));
    }
    return out;
  };
  ic.cubes_at = [ic_n = ic.neighbors](const std::string& t,
                                      const std::function<bool(const std::string&)>& keep) {
    std::vector<std::vector<std::string>> records;
    if (!keep(t)) return records;
    for (const auto& u : ic_n(t))
      if (keep(u)) records.push_back({t, u});
    return records;
  };
  return ic;
}

inline ImplicitMap gen_a(long m, long n) {
  return ImplicitMap{
      "a", [m, n](const std::string& t) { return format(act_a(parse(t), +1, m, n)); },
      [m, n](const std::string& t) { return format(act_a(parse(t), -1, m, n)); }};
}

inline ImplicitMap gen_b(long /*m*/, long /*n*/) {
  return ImplicitMap{"b", [](const std::string& t) { return format(act_b(parse(t), +1)); },
                     [](const std::string& t) { return format(act_b(parse(t), -1)); }};
}

}  // namespace bs

/// Outcome of a demo run: assertion lines plus free-form notes; ok iff every
/// assertion held.
struct DemoReport {
  bool ok = true;
  std::vector<std::string> lines;

  void check(bool cond, const std::string& what) {
    lines.push_back(std::string(cond ? "[ok]   " : "[FAIL] ") + what);
    ok = ok && cond;
  }
  void note(const std::string& s) { lines.push_back("       " + s); }
};

/// The locally-infinite example: on the cubulation of finitely supported
/// integer sequences, u -> shift(u) + e0 has no fixed vertex and unit
/// combinatorial translation length, certified by the axis through the
/// origin. Coordinates are truncated to the declared window so every vertex
/// has finite degree.
inline DemoReport demo_l2(int window, std::uint32_t axis_half, DemoReport* out = nullptr) {
  if (window < static_cast<int>(axis_half))
    throw DomainError("window too small: need window >= axis half-length");
  DemoReport rep;
  ImplicitComplex ic = l2::complex(window);
  ImplicitMap f = l2::shift_add(window);

  ImplicitClassifyParams params;
  params.radius = axis_half;
  params.window = axis_half;
  params.scan_radius = 1;
  params.inversion_radius = 2;
  params.vertex_budget = 400000;  // the radius-5 ball alone has ~125k vertices
  rep.note("coordinate window [-" + std::to_string(window) + ", " + std::to_string(window) +
           "], search ball radius " + std::to_string(params.radius) + ", vertex budget " +
           std::to_string(params.vertex_budget));

  Region region = materialize_region(ic, ic.seed, params.radius, params.vertex_budget);
  rep.note("materialized " + std::to_string(region.order.size()) + " vertices");

  std::size_t fixed = 0, displaced = 0;
  for (const auto& t : region.order) {
    auto img = f.fwd(t);
    if (!img) continue;
    (*img == t ? fixed : displaced)++;
  }
  rep.check(fixed == 0, "no fixed vertex among the " + std::to_string(fixed + displaced) +
                            " ball vertices with images (displacement >= 1 everywhere)");

  Classification c = classify_implicit(ic, f, params, &region);
  rep.check(c.verdict == Verdict::Hyperbolic, "classified hyperbolic (" + c.certificate + ")");
  rep.check(c.delta == 1, "translation length 1 (found " + std::to_string(c.delta) + ")");
  rep.check(c.axis.vertices.size() >= 2 * axis_half + 1,
            "certified axis window of " + std::to_string(c.axis.vertices.size()) + " vertices");

  // d(0, f^n(0)) = n, the orbit of the origin marching along an axis.
  for (std::uint32_t k = 1; k <= std::min<std::uint32_t>(axis_half, 5); ++k) {
    auto img = apply_power(f, static_cast<long>(k), "0");
    std::optional<std::uint32_t> d;
    if (img && region.contains(*img))
      d = region_distance(region, region.index.at("0"), region.index.at(*img));
    rep.check(d && *d == k,
              "d(0, f^" + std::to_string(k) + "(0)) = " + (d ? std::to_string(*d) : "?"));
  }

  ValidationReport ball1 = validate(ball(ic, ic.seed, 1, params.vertex_budget));
  rep.check(ball1.accepted(), "radius-1 ball validates as a cubing");

  rep.note("for contrast: in the ambient CAT(0) metric this map moves points by amounts");
  rep.note("shrinking to zero (a parabolic-type isometry), while its combinatorial");
  rep.note("translation length stays 1; only the combinatorial side is computed here.");
  if (out) *out = rep;
  return rep;
}

/// Bass-Serre tree of BS(m,n): the generator a fixes the base vertex (the
/// action is not proper), the stable letter b translates along an axis
/// through the base, and the defining relation holds on every ball vertex.
inline DemoReport demo_bs(long m, long n, std::uint32_t radius, DemoReport* out = nullptr) {
  if (m < 1 || n < 1) throw DomainError("demo_bs: m and n must be positive");
  if (radius < 3) throw DomainError("demo_bs: radius too small for certification (need >= 3)");
  DemoReport rep;
  ImplicitComplex ic = bs::tree(m, n);
  ImplicitMap a = bs::gen_a(m, n), b = bs::gen_b(m, n);

  ImplicitClassifyParams params;
  params.radius = radius;
  params.window = std::min<std::uint32_t>(radius, 5);
  params.scan_radius = 2;
  params.inversion_radius = 2;

  Region region = materialize_region(ic, ic.seed, radius, params.vertex_budget);
  rep.note("tree ball of radius " + std::to_string(radius) + ": " +
           std::to_string(region.order.size()) + " vertices, degree m+n = " +
           std::to_string(m + n));

  Classification ca = classify_implicit(ic, a, params, &region);
  rep.check(ca.verdict == Verdict::Elliptic && ca.fixed_vertex == "e",
            "a is elliptic with fixed base vertex (" + ca.certificate + ")");
  rep.note("the cyclic group generated by a therefore has a global fixed vertex: the");
  rep.note("tree action alone is not proper.");

  Classification cb = classify_implicit(ic, b, params, &region);
  rep.check(cb.verdict == Verdict::Hyperbolic, "b is hyperbolic (" + cb.certificate + ")");
  rep.check(cb.delta == 1, "translation length of b is 1 (found " + std::to_string(cb.delta) + ")");

  // Relation b a^m b^-1 = a^n, verified symbolically on every ball vertex.
  ImplicitMap lhs = compose(b, compose(implicit_power(a, m), ImplicitMap{
                                                                 "b^-1",
                                                                 [b](const std::string& t) {
                                                                   return b.bwd(t);
                                                                 },
                                                                 [b](const std::string& t) {
                                                                   return b.fwd(t);
                                                                 }}));
  ImplicitMap rhs = implicit_power(a, n);
  std::size_t mismatches = 0;
  for (const auto& t : region.order) {
    auto l = lhs.fwd(t), r = rhs.fwd(t);
    if (!l || !r || *l != *r) ++mismatches;
  }
  rep.check(mismatches == 0, "relation b a^" + std::to_string(m) + " b^-1 = a^" +
                                 std::to_string(n) + " holds on all " +
                                 std::to_string(region.order.size()) + " ball vertices");

  if (cb.verdict == Verdict::Hyperbolic) {
    std::uint32_t nmax = std::min<std::uint32_t>(4, radius);
    PowerLengthReport pl = power_length_check(ic, b, cb, nmax, params, &region);
    for (const auto& e : pl.entries)
      rep.check(e.certified && e.delta == e.power * cb.delta,
                "delta(b^" + std::to_string(e.power) + ") = " + std::to_string(e.delta) + " = " +
                    std::to_string(e.power) + " * delta(b)");
  }

  ValidationReport v = validate(ball(ic, ic.seed, radius, params.vertex_budget));
  rep.check(v.accepted(), "the radius-" + std::to_string(radius) + " tree ball validates as a cubing");
  if (out) *out = rep;
  return rep;
}

/// Check delta(f) <= sum of delta(s_i) for a decomposition f = s_1 ... s_k
/// (applied right to left), with exact finite translation lengths.
inline SubadditivityCheck delta_subadditivity(const Automorphism& f,
                                              const std::vector<Automorphism>& word) {
  if (word.empty()) throw DomainError("empty decomposition");
  Automorphism prod = word.back();
  for (std::size_t i = word.size() - 1; i-- > 0;) prod = word[i].compose(prod);
  if (!(prod == f)) throw DomainError("composition mismatch: the word does not compose to f");

  SubadditivityCheck rep;
  rep.delta_f = translation_length(f).delta;
  for (const auto& s : word) {
    rep.parts.push_back(translation_length(s).delta);
    rep.sum += rep.parts.back();
  }
  rep.ok = rep.delta_f <= rep.sum;
  return rep;
}

}  // namespace ccx
