#pragma once

// Subcommands of the command-line tool. Each one reads a scene (or builds one),
// runs a library query, re-checks what it is about to print, and returns a
// report with the exit code.
//
// Scene roles: the gauge is body "K" (or the only body), the point set is
// list "X", the test point is --point or list "p". `summand` and
// `criterion2d` compare bodies "A" and "B".

#include <strongconv/caratheodory.hpp>
#include <strongconv/covering.hpp>
#include <strongconv/io/scene.hpp>
#include <strongconv/io/svg.hpp>
#include <strongconv/summand.hpp>
#include <strongconv/witnesses.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace strongconv::io {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_input = 2, exit_not_member = 3, exit_hull_undefined = 4 };

struct CommandOptions {
  std::string command;
  std::string witness_kind;  // cone | lower-bound | product
  std::optional<std::string> scene_path;
  std::optional<std::string> scene_text;  // used instead of reading scene_path
  std::optional<Vec> point;
  std::optional<std::string> out;
  std::optional<std::string> svg;  // "-" writes the figure to the report stream
  int m = 6;
  double apex_height = 1.0;
  int dim = 2;
  std::string gauge = "cube";  // lower-bound witness gauge: cube | ball | cross
  std::vector<int> factors{1, 1};
  std::uint64_t seed = 1;
  int grid = 60;
  int samples = 400;
  std::optional<double> tol_margin;
  bool json = false;
};

struct CommandResult {
  int exit_code = exit_ok;
  std::string output;
};

/// Ordered key/value report printed as `key: value` lines or one JSON object.
class Report {
 public:
  template <class T>
  void set(const std::string& key, const T& value) {
    data_[key] = value;
  }
  void set(const std::string& key, const Vec& v) { data_[key] = detail::vec_json(v); }
  void set(const std::string& key, const PointList& pts) {
    json a = json::array();
    for (const Vec& x : pts) a.push_back(detail::vec_json(x));
    data_[key] = a;
  }
  json& raw(const std::string& key) { return data_[key]; }

  std::string text() const {
    std::string out;
    for (const auto& [k, v] : data_.items()) out += k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    return out;
  }
  std::string json_text() const { return data_.dump(2) + "\n"; }

 private:
  json data_ = json::object();
};

namespace detail {

struct RevalidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check(bool ok, const std::string& what) {
  if (!ok) throw RevalidationError("revalidation failed: " + what);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError(0, "cannot read file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SceneError(0, "cannot write file", path);
  out << text;
}

inline Scene load_scene(const CommandOptions& o) {
  Scene s;
  if (o.scene_text)
    s = parse_scene(*o.scene_text);
  else if (o.scene_path)
    s = parse_scene(read_file(*o.scene_path));
  else
    throw SceneError(0, "missing input", "this command needs --scene");
  if (o.tol_margin) {
    s.tolerances.eps_margin = *o.tol_margin;
    try {
      s.tolerances.validate();
    } catch (const std::invalid_argument& e) {
      throw SceneError(0, "invalid tolerances", e.what());
    }
  }
  return s;
}

inline const Body& gauge_of(const Scene& s) {
  if (s.has_body("K")) return s.body("K");
  if (s.bodies.size() == 1) return s.bodies.front().second;
  throw SceneError(0, "unknown reference", "scene needs a gauge body named 'K'");
}

inline Vec test_point(const Scene& s, const CommandOptions& o) {
  Vec p;
  if (o.point)
    p = *o.point;
  else if (s.has_points("p"))
    p = s.point_list("p").front();
  else
    throw SceneError(0, "missing input", "give --point or a point list named 'p'");
  if (p.size() != s.dimension)
    throw SceneError(0, "dimension mismatch", "test point has " + std::to_string(p.size()) + " coordinates");
  return p;
}

inline void put_witness(Report& r, const std::string& prefix, const CoverWitness& w) {
  r.set(prefix + "_t", w.t);
  r.set(prefix + "_u", w.u);
  r.set(prefix + "_margin", w.margin);
}

inline std::string form_name(StrongForm f) {
  switch (f) {
    case StrongForm::empty: return "empty";
    case StrongForm::polytope: return "polytope";
    case StrongForm::ball: return "ball";
    case StrongForm::translates: return "translates";
    case StrongForm::hull_of_points: return "hull_of_points";
    case StrongForm::eroder: return "eroder";
    case StrongForm::product: return "product";
  }
  return "unknown";
}

inline ToleranceConfig loose(ToleranceConfig t) {
  t.eps_feas = t.eps_margin;
  return t;
}

inline void emit_svg(const CommandOptions& o, const std::string& svg, std::string& stream) {
  if (!o.svg) return;
  if (*o.svg == "-" || o.svg->empty())
    stream += svg;
  else
    write_file(*o.svg, svg);
}

inline CommandResult cmd_hull(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& k = gauge_of(s);
  const PointList& x = s.point_list("X");
  const StrongSet h = strong_hull(k, x, s.tolerances);
  r.set("command", "hull");
  r.set("form", form_name(h.form()));
  r.set("points", static_cast<int>(x.size()));
  if (h.form() == StrongForm::polytope) {
    const HPolytope& p = *h.cached_hform();
    json normals = json::array();
    for (int i = 0; i < p.facet_count(); ++i) normals.push_back(vec_json(p.normal(i)));
    r.raw("normals") = normals;
    r.set("offsets", p.offsets());
    if (p.has_vertices()) r.set("vertices", s.dimension == 2 ? convex_hull_2d(p.vertices()) : p.vertices());
  } else if (h.form() == StrongForm::ball) {
    r.set("center", h.closed_ball()->center);
    r.set("radius", h.closed_ball()->radius);
  }
  json sup = json::array();
  for (const Vec& u : direction_grid(s.dimension, 16)) {
    json e = vec_json(u);
    e.push_back(h.support(u));
    sup.push_back(e);
  }
  r.raw("support") = sup;
  for (const Vec& xi : x) check(h.contains(xi, loose(s.tolerances)), "hull misses an input point");
  r.set("revalidated", true);
  std::string extra;
  if (o.svg) {
    Overlays ov;
    if (s.dimension == 2) ov.hulls.push_back(h);
    emit_svg(o, render_svg(s, ov), extra);
  }
  return {exit_ok, extra};
}

inline CommandResult cmd_member(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& k = gauge_of(s);
  const PointList& x = s.point_list("X");
  const Vec p = test_point(s, o);
  const MemberResult m = hull_member(k, x, p, s.tolerances);
  r.set("command", "member");
  r.set("point", p);
  r.set("member", m.member);
  r.set("margin", m.margin);
  r.set("low_margin", m.low_margin);
  r.set("route", m.route);
  if (m.cross_checked) r.set("cross_check_agrees", m.cross_check_agrees);
  if (m.member) {
    check(strong_hull(k, x, s.tolerances).contains(p, loose(s.tolerances)), "member point outside the hull");
  } else {
    check(m.witness.has_value(), "no witness for a non-member");
    put_witness(r, "witness", *m.witness);
    check(revalidate(k, x, p, *m.witness, s.tolerances), "witness translate");
  }
  r.set("revalidated", true);
  std::string extra;
  if (o.svg) {
    Overlays ov;
    if (s.dimension == 2) ov.hulls.push_back(strong_hull(k, x, s.tolerances));
    if (m.witness) ov.translates.emplace_back(k, m.witness->t);
    ov.marks.push_back(p);
    emit_svg(o, render_svg(s, ov), extra);
  }
  return {m.member ? exit_ok : exit_not_member, extra};
}

inline CommandResult cmd_cara(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& k = gauge_of(s);
  const PointList& x = s.point_list("X");
  const Vec p = test_point(s, o);
  r.set("command", "cara");
  r.set("point", p);
  SubsetCertificate c;
  try {
    c = minimal_subset(k, x, p, s.tolerances);
  } catch (const NotMemberError&) {
    r.set("member", false);
    return {exit_not_member, ""};
  }
  r.set("member", true);
  r.raw("indices") = c.indices;
  r.set("size", static_cast<int>(c.indices.size()));
  r.set("subset", select(x, c.indices));
  r.set("margin", c.margin);
  r.set("minimal", c.minimal);
  r.set("refuted_subsets", static_cast<int>(c.excluded.size()));
  check(hull_member_fast(k, select(x, c.indices), p, s.tolerances).member, "subset hull misses the point");
  for (const auto& [idx, w] : c.excluded)
    check(revalidate(k, select(x, idx), p, w, s.tolerances), "refuting translate of a smaller subset");
  r.set("revalidated", true);
  return {exit_ok, ""};
}

inline CommandResult cmd_helly(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& k = gauge_of(s);
  const PointList& x = s.point_list("X");
  const HellyReport h = helly_check(k, x, s.dimension, s.tolerances);
  r.set("command", "helly");
  r.set("fits", h.fits);
  r.set("origin_outside_hull", h.origin_outside_hull);
  r.set("hypothesis_ok", h.hypothesis_ok);
  if (h.failing_subset) r.raw("failing_subset") = *h.failing_subset;
  r.set("escalated", h.escalated);
  r.set("subsets_checked", h.subsets_checked);
  r.set("conclusion", h.conclusion_witness ? "found" : "none");
  if (h.conclusion_witness) {
    put_witness(r, "conclusion", *h.conclusion_witness);
    check(revalidate(k, x, Vec::Zero(s.dimension), *h.conclusion_witness, s.tolerances), "conclusion translate");
  }
  r.set("revalidated", true);
  return {exit_ok, ""};
}

inline CommandResult cmd_summand(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& a = s.body("A");
  const Body& b = s.body("B");
  const SummandReport rep = is_summand(a, b, s.tolerances);
  const double threshold = s.tolerances.eps_feas * std::max(rep.scale, 1.0);
  r.set("command", "summand");
  r.set("verdict", rep.verdict);
  r.set("residual", rep.residual);
  r.set("scale", rep.scale);
  r.set("threshold", threshold);
  r.set("probes", rep.probes);
  r.set("explanation", rep.explanation);
  if (rep.summand) r.set("summand_form", form_name(rep.summand->form()));
  if (rep.witness_direction) {
    const Vec& u = *rep.witness_direction;
    r.set("witness_direction", u);
    const auto g = [&](const Vec& w) { return support(b, w) - support(a, w); };
    if (rep.envelope_combination.empty()) {
      check(std::abs(g(u) - rep.summand->support(u)) > threshold, "support gap at the witness direction");
    } else {
      Vec sum = Vec::Zero(u.size());
      double weighted = 0.0;
      for (const auto& [w, l] : rep.envelope_combination) {
        sum += l * w;
        weighted += l * g(w);
      }
      check((sum - u).norm() <= 1e-9 && g(u) - weighted > threshold, "convexity defect at the witness direction");
    }
  }
  r.set("revalidated", true);
  return {exit_ok, ""};
}

inline CommandResult cmd_gen_test(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& k = gauge_of(s);
  const GeneratingReport g = generating_pair_test(k, o.samples, o.seed, s.tolerances);
  r.set("command", "gen-test");
  r.set("pass", g.pass);
  r.set("pairs_tested", g.pairs_tested);
  r.set("draws", g.draws);
  if (!g.pass) {
    r.set("t1", *g.t1);
    r.set("t2", *g.t2);
    r.set("residual", g.counterexample->residual);
    if (g.counterexample->witness_direction) r.set("witness_direction", *g.counterexample->witness_direction);
    const StrongSet a = erode(k, PointList{*g.t1, *g.t2}, s.tolerances);
    check(!a.empty() && !is_summand(as_body(a), k, s.tolerances).verdict, "counterexample pair");
  }
  r.set("revalidated", true);
  return {exit_ok, ""};
}

inline FactorWitness factor_witness(int d, const ToleranceConfig& tol) {
  if (d == 1) return {segment_1d(-1, 1), {make_vec({-1}), make_vec({1})}, make_vec({0})};
  WitnessInstance w = witness_at_least_n(HPolytope::cube(d, 1.0), tol);
  return {w.gauge, w.points, w.test_point};
}

inline CommandResult cmd_witness(const CommandOptions& o, Report& r) {
  ToleranceConfig tol;
  if (o.tol_margin) tol.eps_margin = *o.tol_margin;
  WitnessInstance w;
  if (o.witness_kind == "cone") {
    w = witness_cone(o.m, o.apex_height, tol);
  } else if (o.witness_kind == "lower-bound") {
    if (o.gauge == "cube")
      w = witness_at_least_n(HPolytope::cube(o.dim, 1.0), tol);
    else if (o.gauge == "cross")
      w = witness_at_least_n(HPolytope::cross_polytope(o.dim, 1.0), tol);
    else if (o.gauge == "ball")
      w = witness_at_least_n(Ball{Vec::Zero(o.dim), 1.0}, tol);
    else
      throw SceneError(0, "invalid option", "gauge must be cube, cross or ball");
  } else if (o.witness_kind == "product") {
    if (o.factors.size() != 2) throw SceneError(0, "invalid option", "a product witness takes two factor dimensions");
    w = witness_product(factor_witness(o.factors[0], tol), factor_witness(o.factors[1], tol), tol);
  } else {
    throw SceneError(0, "invalid option", "witness kind must be cone, lower-bound or product");
  }

  for (const auto& [idx, c] : w.certificates)
    check(revalidate(w.gauge, select(w.points, idx), w.test_point, c, tol), "witness certificate");

  Scene s;
  s.dimension = w.gauge.dim();
  s.bodies.emplace_back("K", w.gauge);
  s.points.emplace_back("X", w.points);
  s.points.emplace_back("p", PointList{w.test_point});
  s.tolerances = tol;
  json meta;
  meta["kind"] = o.witness_kind;
  meta["expected_min_subset"] = w.expected_min_subset;
  meta["parameters"] = json::object();
  for (const auto& [key, v] : w.parameters) meta["parameters"][key] = v;
  meta["certificates"] = json::array();
  for (const auto& [idx, c] : w.certificates) {
    json e;
    e["subset"] = idx;
    e["t"] = vec_json(c.t);
    e["u"] = vec_json(c.u);
    e["margin"] = c.margin;
    meta["certificates"].push_back(e);
  }
  s.witness = meta;

  r.set("command", "witness");
  r.set("kind", o.witness_kind);
  r.set("dimension", s.dimension);
  r.set("points", static_cast<int>(w.points.size()));
  r.set("test_point", w.test_point);
  r.set("expected_min_subset", w.expected_min_subset);
  for (const auto& [key, v] : w.parameters) r.set(key, v);
  r.set("certificates", static_cast<int>(w.certificates.size()));
  r.set("revalidated", true);

  std::string svg;
  if (o.svg) {
    if (o.witness_kind == "cone")
      svg = render_cone_base(cone_base_geometry(o.m));
    else
      svg = render_svg(s, Overlays{{}, {}, {w.test_point}});
  }
  if (o.svg && (*o.svg == "-" || o.svg->empty())) {
    if (o.out) write_file(*o.out, emit_scene(s));
    return {exit_ok, svg};
  }
  if (o.svg) write_file(*o.svg, svg);
  if (o.out) {
    write_file(*o.out, emit_scene(s));
    return {exit_ok, ""};
  }
  return {exit_ok, emit_scene(s)};
}

inline CommandResult cmd_criterion(const CommandOptions& o, Report& r) {
  const Scene s = load_scene(o);
  const Body& a = s.body("A");
  const Body& b = s.body("B");
  const CriterionReport c = criterion_check_2d(a, b, o.grid, s.tolerances);
  r.set("command", "criterion2d");
  r.set("hypothesis_ok", c.hypothesis_ok);
  r.set("interior_translate", c.interior_translate);
  r.set("summand_verdict", c.summand_verdict);
  r.set("residual", c.summand.residual);
  r.set("grid", c.grid);
  r.set("translates_checked", c.translates_checked);
  r.set("acyclicity_failures", static_cast<int>(c.acyclicity_failures.size()));
  json fails = json::array();
  const double eps = 10 * s.tolerances.eps_feas * std::max(c.summand.scale, 1.0);
  for (std::size_t i = 0; i < c.acyclicity_failures.size() && i < 10; ++i) {
    const auto& f = c.acyclicity_failures[i];
    json e;
    e["t"] = vec_json(f.translate);
    e["components"] = f.components;
    e["whole_boundary"] = f.whole_boundary;
    fails.push_back(e);
    const auto again = boundary_contact(a, b, f.translate, eps);
    check(again.count == f.components && again.whole == f.whole_boundary, "boundary contact at a failing translate");
  }
  r.raw("failures") = fails;
  r.set("revalidated", true);
  return {exit_ok, ""};
}

}  // namespace detail

/// Runs one subcommand. Never throws; errors become exit codes with a message
/// on the report stream.
inline CommandResult run_command(const CommandOptions& o) {
  Report r;
  CommandResult res;
  try {
    if (o.command == "hull")
      res = detail::cmd_hull(o, r);
    else if (o.command == "member")
      res = detail::cmd_member(o, r);
    else if (o.command == "cara")
      res = detail::cmd_cara(o, r);
    else if (o.command == "helly")
      res = detail::cmd_helly(o, r);
    else if (o.command == "summand")
      res = detail::cmd_summand(o, r);
    else if (o.command == "gen-test")
      res = detail::cmd_gen_test(o, r);
    else if (o.command == "witness")
      res = detail::cmd_witness(o, r);
    else if (o.command == "criterion2d")
      res = detail::cmd_criterion(o, r);
    else
      return {exit_input, "error: unknown command '" + o.command + "'\n"};
  } catch (const SceneError& e) {
    return {exit_input, std::string("error: ") + e.what() + "\n"};
  } catch (const HullUndefinedError& e) {
    r.set("error", "hull undefined");
    return {exit_hull_undefined, o.json ? r.json_text() : r.text()};
  } catch (const detail::RevalidationError& e) {
    return {exit_failure, std::string("error: ") + e.what() + "\n"};
  } catch (const ConvergenceError& e) {
    return {exit_failure, std::string("error: ") + e.what() + "\n"};
  } catch (const ConsistencyError& e) {
    return {exit_failure, std::string("error: ") + e.what() + "\n"};
  } catch (const GeometryError& e) {
    return {exit_input, std::string("error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {exit_input, std::string("error: ") + e.what() + "\n"};
  }
  // Witness scenes and figures written to the report stream stand alone.
  if (o.command == "witness" && !res.output.empty()) return res;
  res.output = (o.json ? r.json_text() : r.text()) + res.output;
  return res;
}

}  // namespace strongconv::io
