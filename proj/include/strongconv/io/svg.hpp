#pragma once

// SVG figures of planar scenes. Coordinates are written in scene units inside
// a group that flips the y axis; every number goes through one fixed format
// so the output is byte-stable.

#include <strongconv/io/scene.hpp>
#include <strongconv/strong_set.hpp>
#include <strongconv/witnesses.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace strongconv::io {

struct RenderSpec {
  /// Viewport in scene units; computed from the content when absent.
  std::optional<std::array<double, 4>> viewport;  // min_x, min_y, max_x, max_y
  int width_px = 640;
  double margin = 0.1;
  double stroke = 0.008;
  /// 3D content is drawn as its section by the plane z = section_z.
  std::optional<double> section_z;
  bool draw_bodies = true;
  bool draw_hulls = true;
  bool draw_translates = true;
  bool draw_points = true;
  std::string body_color = "#2b5fad";
  std::string hull_color = "#e8a33d";
  std::string hull_fill = "#f8e3bf";
  std::string translate_color = "#3a9b5c";
  std::string point_color = "#111111";
  std::string mark_color = "#c23b22";
};

struct Overlays {
  std::vector<StrongSet> hulls;
  std::vector<std::pair<Body, Vec>> translates;  // gauge and shift
  PointList marks;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline std::string xy(const Vec& p) { return num(p(0)) + "," + num(p(1)); }

// Boundary of a planar body as a polygon; balls are handled separately.
inline PointList outline(const std::function<Vec(const Vec&)>& argmax, int samples = 720) {
  PointList pts;
  for (int k = 0; k < samples; ++k) {
    const double a = 2 * std::numbers::pi * k / samples;
    Vec x = argmax(make_vec({std::cos(a), std::sin(a)}));
    if (pts.empty() || (x - pts.back()).norm() > 1e-9) pts.push_back(std::move(x));
  }
  return pts.size() >= 3 ? convex_hull_2d(pts) : pts;
}

// Planar section of a body by z = z0; nothing when the section is empty.
inline std::optional<Body> section(const Body& b, double z0) {
  if (b.dim() == 2) return b;
  if (b.dim() != 3) throw GeometryError("only planar content or sections of 3D bodies can be drawn");
  if (b.is<Ball>()) {
    const auto& s = b.as<Ball>();
    const double h = z0 - s.center(2);
    if (std::abs(h) >= s.radius) return std::nullopt;
    return Ball{s.center.head(2), std::sqrt(s.radius * s.radius - h * h)};
  }
  if (b.is<ConeBody>()) {
    const auto& c = b.as<ConeBody>();
    const double h = z0 - c.base_center(2);
    if (h < 0 || h >= c.apex_height) return std::nullopt;
    return Ball{c.base_center.head(2), c.slice_radius(h)};
  }
  if (b.is<HPolytope>()) {
    const auto& p = b.as<HPolytope>();
    HPolytope s(p.normals().leftCols(2), p.offsets() - z0 * p.normals().col(2));
    if (s.empty()) return std::nullopt;
    return s;
  }
  throw GeometryError("no planar section for this body type");
}

class SvgWriter {
 public:
  explicit SvgWriter(double stroke) : stroke_(stroke) {}

  void circle(const Vec& c, double r, const std::string& cls, const std::string& stroke, const std::string& fill) {
    body_ += "    <circle class=\"" + cls + "\" cx=\"" + num(c(0)) + "\" cy=\"" + num(c(1)) + "\" r=\"" + num(r) +
             "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_) + "\"/>\n";
    grow(c, r);
  }

  void polygon(const PointList& pts, const std::string& cls, const std::string& stroke, const std::string& fill,
               bool dashed = false) {
    std::string p;
    for (const Vec& x : pts) {
      if (!p.empty()) p += " ";
      p += xy(x);
      grow(x, 0);
    }
    body_ += "    <polygon class=\"" + cls + "\" points=\"" + p + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
             "\" stroke-width=\"" + num(stroke_) + "\"" + dash(dashed) + "/>\n";
  }

  /// Arc of the circle of radius r from a to b; counterclockwise when
  /// `ccw` holds, the short way round.
  void arc(const Vec& a, const Vec& b, double r, bool ccw, const std::string& cls, const std::string& stroke) {
    body_ += "    <path class=\"" + cls + "\" d=\"M " + xy(a) + " A " + num(r) + " " + num(r) + " 0 0 " +
             (ccw ? "1" : "0") + " " + xy(b) + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(2 * stroke_) + "\"/>\n";
    grow(a, 0);
    grow(b, 0);
  }

  void dashed_circle(const Vec& c, double r, const std::string& cls, const std::string& stroke) {
    body_ += "    <circle class=\"" + cls + "\" cx=\"" + num(c(0)) + "\" cy=\"" + num(c(1)) + "\" r=\"" + num(r) +
             "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_) + "\"" + dash(true) + "/>\n";
    grow(c, r);
  }

  std::string document(const RenderSpec& spec) const {
    double x0, y0, x1, y1;
    if (spec.viewport) {
      x0 = (*spec.viewport)[0];
      y0 = (*spec.viewport)[1];
      x1 = (*spec.viewport)[2];
      y1 = (*spec.viewport)[3];
    } else {
      x0 = lo_x_ - spec.margin;
      y0 = lo_y_ - spec.margin;
      x1 = hi_x_ + spec.margin;
      y1 = hi_y_ + spec.margin;
    }
    if (!(std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1)) || !(x1 > x0) ||
        !(y1 > y0))
      throw GeometryError("viewport must be finite and nonempty");
    const double w = x1 - x0, h = y1 - y0;
    const int height_px = static_cast<int>(std::lround(spec.width_px * h / w));
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width_px) + "\" height=\"" +
           std::to_string(height_px) + "\" viewBox=\"" + num(x0) + " " + num(-y1) + " " + num(w) + " " + num(h) +
           "\">\n";
    out += "  <g transform=\"scale(1,-1)\">\n";
    out += body_;
    out += "  </g>\n</svg>\n";
    return out;
  }

 private:
  std::string dash(bool on) const {
    return on ? " stroke-dasharray=\"" + num(4 * stroke_) + " " + num(3 * stroke_) + "\"" : "";
  }
  void grow(const Vec& c, double r) {
    lo_x_ = std::min(lo_x_, c(0) - r);
    hi_x_ = std::max(hi_x_, c(0) + r);
    lo_y_ = std::min(lo_y_, c(1) - r);
    hi_y_ = std::max(hi_y_, c(1) + r);
  }

  double stroke_;
  std::string body_;
  double lo_x_ = std::numeric_limits<double>::infinity(), hi_x_ = -std::numeric_limits<double>::infinity();
  double lo_y_ = std::numeric_limits<double>::infinity(), hi_y_ = -std::numeric_limits<double>::infinity();
};

inline void draw_body(SvgWriter& w, const Body& b, const std::string& cls, const std::string& stroke,
                      const std::string& fill, bool dashed = false) {
  if (b.is<Ball>()) {
    const auto& s = b.as<Ball>();
    if (dashed)
      w.dashed_circle(s.center, s.radius, cls, stroke);
    else
      w.circle(s.center, s.radius, cls, stroke, fill);
    return;
  }
  if (b.is<HPolytope>() && b.as<HPolytope>().has_vertices()) {
    w.polygon(convex_hull_2d(b.as<HPolytope>().vertices()), cls, stroke, fill, dashed);
    return;
  }
  w.polygon(outline([&](const Vec& u) { return support_point(b, u); }), cls, stroke, fill, dashed);
}

inline void draw_hull(SvgWriter& w, const StrongSet& s, const std::string& color, const std::string& fill) {
  if (s.form() == StrongForm::ball) {
    w.circle(s.closed_ball()->center, s.closed_ball()->radius, "hull", color, fill);
    return;
  }
  if (s.form() == StrongForm::polytope && s.cached_hform()->has_vertices()) {
    w.polygon(convex_hull_2d(s.cached_hform()->vertices()), "hull", color, fill);
    return;
  }
  w.polygon(outline([&](const Vec& u) { return s.support_point(u); }), "hull", color, fill);
}

}  // namespace detail

/// Bodies, points and overlays of a scene. 3D scenes need `section_z`.
inline std::string render_svg(const Scene& scene, const Overlays& overlays, const RenderSpec& spec = {}) {
  if (scene.dimension != 2 && !(scene.dimension == 3 && spec.section_z))
    throw GeometryError("scene is not planar and no section plane was given");
  const double z0 = spec.section_z.value_or(0.0);
  auto planar = [&](const Body& b) { return scene.dimension == 2 ? std::optional<Body>(b) : detail::section(b, z0); };
  auto planar_point = [&](const Vec& x) -> std::optional<Vec> {
    if (scene.dimension == 2) return x;
    if (std::abs(x(2) - z0) > 1e-9) return std::nullopt;
    return Vec(x.head(2));
  };

  detail::SvgWriter w(spec.stroke);
  if (spec.draw_bodies)
    for (const auto& [name, b] : scene.bodies)
      if (auto s = planar(b)) detail::draw_body(w, *s, "body", spec.body_color, "none");
  if (spec.draw_hulls) {
    for (const StrongSet& h : overlays.hulls) {
      if (h.dim() != 2) throw GeometryError("hull overlays must be planar");
      detail::draw_hull(w, h, spec.hull_color, spec.hull_fill);
    }
  }
  if (spec.draw_translates)
    for (const auto& [g, t] : overlays.translates)
      if (auto s = planar(translate(g, t))) detail::draw_body(w, *s, "translate", spec.translate_color, "none", true);
  const double r = 3 * spec.stroke;
  if (spec.draw_points) {
    for (const auto& [name, list] : scene.points)
      for (const Vec& x : list)
        if (auto p = planar_point(x)) w.circle(*p, r, "point", spec.point_color, spec.point_color);
    for (const Vec& x : overlays.marks)
      if (auto p = planar_point(x)) w.circle(*p, 1.5 * r, "mark", spec.mark_color, spec.mark_color);
  }
  return w.document(spec);
}

/// The base-plane picture of the cone witness: the unit base circle, the
/// circle of radius 1/2 with the m-gon, the m unit arcs bounding the disk
/// hull of the polygon, the unit circle through the neighbours of the
/// dropped vertex, and the foot of p at the centre.
inline std::string render_cone_base(const ConeBaseGeometry& g, const RenderSpec& spec = {}) {
  detail::SvgWriter w(spec.stroke);
  const Vec origin = Vec::Zero(2);
  w.circle(origin, 1.0, "base", spec.body_color, "none");
  w.dashed_circle(origin, 0.5, "inner", "#888888");
  w.polygon(g.vertices, "polygon", spec.point_color, "none");
  const int m = g.m;
  for (int k = 0; k < m; ++k)
    w.arc(g.vertices[static_cast<std::size_t>(k)], g.vertices[static_cast<std::size_t>((k + 1) % m)], 1.0, true,
          "arc", spec.hull_color);
  w.dashed_circle(g.big_center, 1.0, "big-circle", spec.translate_color);
  for (const Vec& v : g.vertices) w.circle(v, 3 * spec.stroke, "vertex", spec.point_color, spec.point_color);
  w.circle(g.vertices[static_cast<std::size_t>(g.dropped)], 5 * spec.stroke, "dropped", spec.mark_color, "none");
  w.circle(origin, 4 * spec.stroke, "p", spec.mark_color, spec.mark_color);
  return w.document(spec);
}

}  // namespace strongconv::io
