#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/classify.hpp"
#include "ccx/complex.hpp"
#include "ccx/demos.hpp"
#include "ccx/hyperplanes.hpp"
#include "ccx/implicit.hpp"
#include "ccx/metric.hpp"
#include "ccx/subdivision.hpp"
#include "ccx/wallspace.hpp"

namespace ccx::cli {

// Exit codes: 0 ok (incl. elliptic/hyperbolic verdicts), 1 validation or
// inversion findings, 2 usage/parse errors, 3 indeterminate classification.
enum ExitCode : int { kOk = 0, kFinding = 1, kUsage = 2, kIndeterminate = 3 };

namespace detail {

struct Args {
  std::vector<std::string> positional;
  std::vector<std::pair<std::string, std::string>> flags;
  bool quiet = false;
  std::string format = "plain";
  unsigned jobs = 1;

  std::optional<std::string> flag(const std::string& name) const {
    for (const auto& [k, v] : flags)
      if (k == name) return v;
    return std::nullopt;
  }
};

inline bool flag_takes_value(const std::string& name) {
  static const std::vector<std::string> valued = {"-o",          "--map",    "--max-power",
                                                  "--window",    "--radius", "--axis",
                                                  "--embedding", "--format", "--jobs",
                                                  "--m",         "--n",      "--budget"};
  return std::find(valued.begin(), valued.end(), name) != valued.end();
}

inline Args parse_args(const std::vector<std::string>& argv, std::size_t start,
                       std::string& error) {
  Args a;
  for (std::size_t i = start; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s == "--quiet") {
      a.quiet = true;
    } else if (s.size() >= 1 && s[0] == '-' && s != "-") {
      if (!flag_takes_value(s)) {
        error = "unknown flag '" + s + "'";
        return a;
      }
      if (i + 1 >= argv.size()) {
        error = "flag '" + s + "' expects a value";
        return a;
      }
      a.flags.push_back({s, argv[++i]});
    } else {
      a.positional.push_back(s);
    }
  }
  if (auto f = a.flag("--format")) {
    if (*f != "plain" && *f != "tsv") {
      error = "--format must be plain or tsv";
      return a;
    }
    a.format = *f;
  }
  if (auto j = a.flag("--jobs")) a.jobs = static_cast<unsigned>(std::stoul(*j));
  return a;
}

inline std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string plural(std::size_t n, const std::string& one, const std::string& many) {
  return std::to_string(n) + " " + (n == 1 ? one : many);
}

inline std::string count_summary(const CubeComplex& x) {
  std::string s = plural(x.cube_count(0), "vertex", "vertices") + ", " +
                  plural(x.cube_count(1), "edge", "edges");
  if (x.dimension() >= 2) s += ", " + plural(x.cube_count(2), "square", "squares");
  for (std::uint32_t d = 3; d <= x.dimension(); ++d)
    s += ", " + plural(x.cube_count(d), std::to_string(d) + "-cube", std::to_string(d) + "-cubes");
  return s;
}

inline void write_output(const Args& a, const std::string& text, std::ostream& out) {
  if (auto o = a.flag("-o")) {
    std::ofstream f(*o);
    if (!f) throw Error("cannot write file '" + *o + "'");
    f << text;
  } else {
    out << text;
  }
}

}  // namespace detail

inline const char* usage() {
  return "usage: ccx <verb> [args]\n"
         "  check FILE [--jobs J] [--quiet]      validate a CCX complex\n"
         "  emit FILE [-o OUT]                   canonical maximal-cube form\n"
         "  hyperplanes FILE [--format plain|tsv] walls with sizes and sides\n"
         "  dist FILE U V                        combinatorial distance\n"
         "  geodesic FILE V0 V1 ... VN           geodesic test for a path\n"
         "  subdivide FILE [-o OUT]              cubical subdivision\n"
         "  classify FILE --map MAP [--max-power K] [--window N] [--radius R] [--quiet]\n"
         "  cubulate FILE [-o OUT] [--embedding OUT.map]\n"
         "  demo l2 --window K --axis N          locally infinite shift example\n"
         "  demo bs --m M --n N --radius R       Bass-Serre tree actions\n";
}

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (argv.empty()) {
    err << usage();
    return kUsage;
  }
  const std::string verb = argv[0];
  const std::vector<std::string> verbs = {"check",     "emit",     "hyperplanes",
                                          "dist",      "geodesic", "subdivide",
                                          "classify",  "cubulate", "demo"};
  if (std::find(verbs.begin(), verbs.end(), verb) == verbs.end()) {
    err << "unknown verb '" << verb << "'\n" << usage();
    return kUsage;
  }
  std::string flag_error;
  detail::Args a = detail::parse_args(argv, 1, flag_error);
  if (!flag_error.empty()) {
    err << flag_error << "\n";
    return kUsage;
  }

  try {
    if (verb == "check") {
      if (a.positional.size() != 1) {
        err << "check expects one file\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      ValidationReport rep = validate(x, a.jobs);
      if (rep.accepted()) {
        out << "valid cubing: " << detail::count_summary(x) << "\n";
        return kOk;
      }
      out << "not a cubing: " << detail::count_summary(x) << "\n";
      if (!a.quiet) {
        out << "flags: closure=" << rep.closure_ok << " compatibility=" << rep.compatibility_ok
            << " flag-links=" << rep.links_flag_ok << " median=" << rep.median_ok << "\n";
        for (const auto& d : rep.failures) out << "  [" << d.kind << "] " << d.detail << "\n";
      }
      return kFinding;
    }

    if (verb == "emit") {
      if (a.positional.size() != 1) {
        err << "emit expects one file\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      detail::write_output(a, x.emit_string(), out);
      return kOk;
    }

    if (verb == "hyperplanes") {
      if (a.positional.size() != 1) {
        err << "hyperplanes expects one file\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      ValidationReport rep = validate(x);
      if (!rep.accepted()) {
        out << "not a cubing; hyperplane structure is only guaranteed on cubings\n";
        return kFinding;
      }
      WallSet ws = walls(x);
      for (const auto& w : ws.walls) {
        HalfspacePair hp = halfspaces(x, ws, w);
        if (a.format == "tsv")
          out << w.id << "\t" << w.edges.size() << "\t" << hp.side0.size() << "\t"
              << hp.side1.size() << "\n";
        else
          out << "wall " << w.id << ": " << w.edges.size() << " edges, sides "
              << hp.side0.size() << "/" << hp.side1.size() << "\n";
      }
      return kOk;
    }

    if (verb == "dist") {
      if (a.positional.size() != 3) {
        err << "dist expects FILE U V\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      out << distance(x, a.positional[1], a.positional[2]) << "\n";
      return kOk;
    }

    if (verb == "geodesic") {
      if (a.positional.size() < 2) {
        err << "geodesic expects FILE and at least one vertex\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      CombinatorialPath p =
          CombinatorialPath::from_tokens(
              x, std::vector<std::string>(a.positional.begin() + 1, a.positional.end()))
              .normalized();
      WallSet ws = walls(x);
      CrossingSequence cs = crossing_sequence(x, ws, p);
      if (auto rep = cs.first_repeat())
        out << "not-geodesic " << cs.walls[*rep] << "\n";
      else
        out << "geodesic\n";
      return kOk;
    }

    if (verb == "subdivide") {
      if (a.positional.size() != 1) {
        err << "subdivide expects one file\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      SubdivisionMap sm = subdivide(x);
      detail::write_output(a, sm.subdivided->emit_string(), out);
      return kOk;
    }

    if (verb == "classify") {
      if (a.positional.size() != 1 || !a.flag("--map")) {
        err << "classify expects FILE --map MAP\n";
        return kUsage;
      }
      CubeComplex x = CubeComplex::load_string(detail::slurp_file(a.positional[0]));
      ValidationReport vrep = validate(x);
      if (!vrep.accepted()) {
        out << "not a cubing; classification requires a validated complex\n";
        return kFinding;
      }
      Automorphism f = Automorphism::load_string(x, detail::slurp_file(*a.flag("--map")));
      ClassifyParams params;
      if (auto k = a.flag("--max-power")) params.max_power = std::stoul(*k);
      if (auto n = a.flag("--window")) params.window = std::stoul(*n);
      HyperplaneData hd = hyperplane_data(x);
      Classification c = classify(x, hd, f, params);
      out << "verdict: " << to_string(c.verdict) << "\n";
      if (!a.quiet) {
        switch (c.verdict) {
          case Verdict::Elliptic:
            out << "fixed vertex: " << c.fixed_vertex << "\n";
            break;
          case Verdict::Hyperbolic:
            out << "delta: " << c.delta << "\nwitness: " << c.witness << "\n";
            break;
          case Verdict::InversionFound:
            out << "inversion along wall " << c.inversion_wall << " at power "
                << c.inversion_power << "\n";
            break;
          case Verdict::Indeterminate:
            out << "best displacement: " << c.best_displacement << "\n";
            break;
        }
        out << "certificate: " << c.certificate << "\n";
      }
      switch (c.verdict) {
        case Verdict::InversionFound: return kFinding;
        case Verdict::Indeterminate: return kIndeterminate;
        default: return kOk;
      }
    }

    if (verb == "cubulate") {
      if (a.positional.size() != 1) {
        err << "cubulate expects one file\n";
        return kUsage;
      }
      Wallspace w = Wallspace::load_string(detail::slurp_file(a.positional[0]));
      Cubulation cb = cubulate(w);
      detail::write_output(a, cb.complex->emit_string(), out);
      if (auto e = a.flag("--embedding")) {
        std::ofstream f(*e);
        if (!f) throw Error("cannot write file '" + *e + "'");
        for (const auto& [p, v] : cb.embedding) f << p << " -> " << v << "\n";
      }
      return kOk;
    }

    if (verb == "demo") {
      if (a.positional.size() != 1 || (a.positional[0] != "l2" && a.positional[0] != "bs")) {
        err << "demo expects 'l2' or 'bs'\n";
        return kUsage;
      }
      DemoReport rep;
      if (a.positional[0] == "l2") {
        int window = a.flag("--window") ? std::stoi(*a.flag("--window")) : 6;
        std::uint32_t axis = a.flag("--axis") ? std::stoul(*a.flag("--axis")) : 5;
        rep = demo_l2(window, axis);
      } else {
        long m = a.flag("--m") ? std::stol(*a.flag("--m")) : 1;
        long n = a.flag("--n") ? std::stol(*a.flag("--n")) : 2;
        std::uint32_t radius = a.flag("--radius") ? std::stoul(*a.flag("--radius")) : 4;
        rep = demo_bs(m, n, radius);
      }
      if (!a.quiet)
        for (const auto& l : rep.lines) out << l << "\n";
      out << (rep.ok ? "demo: all assertions passed\n" : "demo: FAILED\n");
      return rep.ok ? kOk : kFinding;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFinding;
  }
  err << usage();
  return kUsage;
}

}  // namespace ccx::cli
