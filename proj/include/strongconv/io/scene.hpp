#pragma once

// Scene files.
//
//   {
//     "dimension": 2,
//     "bodies": { "K": { "type": "polytope", "normals": [[1, 0], ...], "offsets": [2, ...] } },
//     "points": { "X": [[0, 0], [1, 1]], "p": [[1.5, 0.5]] },
//     "tolerances": { "eps_margin": 1e-6 }
//   }
//
// Body types: polytope, box, cube, cross_polytope, polygon, segment, ball,
// cone, product (with inline "factors"). Every top-level body and point has
// the scene dimension. Errors carry the line of the offending value.

#include <strongconv/body.hpp>

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strongconv::io {

using json = nlohmann::ordered_json;

class SceneError : public std::runtime_error {
 public:
  SceneError(int line, std::string kind, const std::string& detail)
      : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + kind +
                           (detail.empty() ? std::string() : ": " + detail)),
        line_(line),
        kind_(std::move(kind)) {}

  int line() const { return line_; }
  const std::string& kind() const { return kind_; }

 private:
  int line_;
  std::string kind_;
};

struct Scene {
  int dimension = 0;
  std::vector<std::pair<std::string, Body>> bodies;
  std::vector<std::pair<std::string, PointList>> points;
  ToleranceConfig tolerances;
  json witness;  // optional metadata carried by generated scenes

  bool has_body(const std::string& name) const {
    for (const auto& [k, b] : bodies)
      if (k == name) return true;
    return false;
  }
  const Body& body(const std::string& name) const {
    for (const auto& [k, b] : bodies)
      if (k == name) return b;
    throw SceneError(0, "unknown reference", "no body named '" + name + "'");
  }
  bool has_points(const std::string& name) const {
    for (const auto& [k, p] : points)
      if (k == name) return true;
    return false;
  }
  const PointList& point_list(const std::string& name) const {
    for (const auto& [k, p] : points)
      if (k == name) return p;
    throw SceneError(0, "unknown reference", "no point list named '" + name + "'");
  }
};

namespace detail {

inline std::string pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

// Line on which each value starts, keyed by JSON pointer. Only called on
// text that already parsed.
inline std::map<std::string, int> value_lines(const std::string& text) {
  struct Frame {
    bool object;
    std::string path;
    std::string key;
    int index = 0;
    bool want_key = true;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;
  std::size_t i = 0;

  auto here = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    return f.path + "/" + (f.object ? pointer_token(f.key) : std::to_string(f.index));
  };
  auto read_string = [&]() {
    std::string s;
    ++i;
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < text.size()) {
        s += text[i + 1];
        i += 2;
        continue;
      }
      if (text[i] == '\n') ++line;
      s += text[i++];
    }
    ++i;
    return s;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == ':') {
      ++i;
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object)
          stack.back().want_key = true;
        else
          ++stack.back().index;
      }
      ++i;
    } else if (c == '}' || c == ']') {
      stack.pop_back();
      ++i;
    } else if (c == '"' && !stack.empty() && stack.back().object && stack.back().want_key) {
      stack.back().key = read_string();
      stack.back().want_key = false;
    } else {
      const std::string path = here();
      lines.emplace(path, line);
      if (c == '{' || c == '[') {
        stack.push_back({c == '{', path, "", 0, true});
        ++i;
      } else if (c == '"') {
        read_string();
      } else {
        while (i < text.size() && std::string(",}] \t\r\n").find(text[i]) == std::string::npos) ++i;
      }
    }
  }
  return lines;
}

inline int byte_line(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < text.size() && i < byte; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

class SceneReader {
 public:
  explicit SceneReader(std::map<std::string, int> lines) : lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& kind, const std::string& detail = "") const {
    std::string p = path;
    while (true) {
      auto it = lines_.find(p);
      if (it != lines_.end()) throw SceneError(it->second, kind, detail + (path.empty() ? "" : " (at " + path + ")"));
      if (p.empty()) break;
      p = p.substr(0, p.rfind('/'));
    }
    throw SceneError(0, kind, detail);
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "syntax error", "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "syntax error", "number must be finite");
    return v;
  }

  double positive(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (!(v > 0)) fail(path, "degenerate body", "value must be positive");
    return v;
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "syntax error", "expected an integer");
    return j.get<int>();
  }

  Vec vector(const json& j, const std::string& path, int dim = -1) const {
    if (!j.is_array() || j.empty()) fail(path, "syntax error", "expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = number(j[i], path + "/" + std::to_string(i));
    if (dim >= 0 && v.size() != dim)
      fail(path, "dimension mismatch",
           "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
    return v;
  }

  const json& field(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.contains(key)) fail(path, "syntax error", "missing field '" + key + "'");
    return obj.at(key);
  }

  Body body(const json& j, const std::string& path, int dim) const {
    if (!j.is_object()) fail(path, "syntax error", "a body is an object with a \"type\"");
    const json& t = field(j, "type", path);
    if (!t.is_string()) fail(path + "/type", "syntax error", "type must be a string");
    const std::string type = t.get<std::string>();
    Body b = build(type, j, path, dim);
    if (dim >= 0 && b.dim() != dim)
      fail(path, "dimension mismatch",
           "body has dimension " + std::to_string(b.dim()) + ", scene has " + std::to_string(dim));
    return b;
  }

 private:
  Body build(const std::string& type, const json& j, const std::string& path, int dim) const {
    try {
      if (type == "polytope") {
        const json& rows = field(j, "normals", path);
        const json& offs = field(j, "offsets", path);
        if (!rows.is_array() || rows.empty()) fail(path + "/normals", "syntax error", "expected an array of normals");
        if (!offs.is_array() || offs.size() != rows.size())
          fail(path + "/offsets", "syntax error", "one offset per normal");
        const int n = dim >= 0 ? dim : static_cast<int>(rows[0].size());
        Mat A(static_cast<Eigen::Index>(rows.size()), n);
        Vec b(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const std::string rp = path + "/normals/" + std::to_string(i);
          const Vec a = vector(rows[i], rp, n);
          if (!(a.norm() > 0)) fail(rp, "degenerate normal", "normal vector is zero");
          A.row(static_cast<Eigen::Index>(i)) = a.transpose();
          b(static_cast<Eigen::Index>(i)) = number(offs[i], path + "/offsets/" + std::to_string(i));
        }
        return HPolytope::checked(A, b);
      }
      if (type == "box") {
        const Vec lo = vector(field(j, "lo", path), path + "/lo", dim);
        const Vec hi = vector(field(j, "hi", path), path + "/hi", static_cast<int>(lo.size()));
        if (!((hi - lo).minCoeff() > 0)) fail(path, "degenerate body", "box needs lo < hi in every coordinate");
        return HPolytope::box(lo, hi);
      }
      if (type == "cube" || type == "cross_polytope") {
        const int n = j.contains("dimension") ? integer(j.at("dimension"), path + "/dimension") : dim;
        if (n < 1) fail(path, "syntax error", "cube needs a dimension");
        if (type == "cube") return HPolytope::cube(n, positive(field(j, "half_width", path), path + "/half_width"));
        return HPolytope::cross_polytope(n, positive(field(j, "radius", path), path + "/radius"));
      }
      if (type == "polygon") {
        const json& vs = field(j, "vertices", path);
        if (!vs.is_array()) fail(path + "/vertices", "syntax error", "expected an array of vertices");
        PointList pts;
        for (std::size_t i = 0; i < vs.size(); ++i) pts.push_back(vector(vs[i], path + "/vertices/" + std::to_string(i), 2));
        return HPolytope::polygon(pts);
      }
      if (type == "segment") {
        const Vec p = vector(field(j, "from", path), path + "/from", dim);
        const Vec q = vector(field(j, "to", path), path + "/to", static_cast<int>(p.size()));
        return HPolytope::segment(p, q);
      }
      if (type == "ball") {
        const Vec c = vector(field(j, "center", path), path + "/center", dim);
        return Ball{c, positive(field(j, "radius", path), path + "/radius")};
      }
      if (type == "cone") {
        ConeBody c;
        c.base_center = vector(field(j, "base_center", path), path + "/base_center", 3);
        c.base_radius = positive(field(j, "base_radius", path), path + "/base_radius");
        c.apex_height = positive(field(j, "apex_height", path), path + "/apex_height");
        return c;
      }
      if (type == "product") {
        const json& fs = field(j, "factors", path);
        if (!fs.is_array() || fs.size() < 2) fail(path + "/factors", "syntax error", "a product needs two or more factors");
        ProductBody p;
        for (std::size_t i = 0; i < fs.size(); ++i) p.factors.push_back(body(fs[i], path + "/factors/" + std::to_string(i), -1));
        return p;
      }
    } catch (const UnboundedError&) {
      fail(path, "unbounded body");
    } catch (const EmptyError&) {
      fail(path, "empty body");
    } catch (const SceneError&) {
      throw;
    } catch (const GeometryError& e) {
      fail(path, "degenerate body", e.what());
    }
    fail(path + "/type", "syntax error", "unknown body type '" + type + "'");
  }

  std::map<std::string, int> lines_;
};

inline json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i) + 0.0);  // no negative zeros
  return a;
}

}  // namespace detail

inline Scene parse_scene(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(detail::byte_line(text, e.byte), "syntax error", e.what());
  }
  detail::SceneReader r(detail::value_lines(text));
  if (!root.is_object()) r.fail("", "syntax error", "a scene is a JSON object");
  for (const auto& [key, value] : root.items())
    if (key != "dimension" && key != "bodies" && key != "points" && key != "tolerances" && key != "witness" &&
        key != "description")
      r.fail("/" + detail::pointer_token(key), "syntax error", "unknown field '" + key + "'");

  Scene s;
  s.dimension = r.integer(r.field(root, "dimension", ""), "/dimension");
  if (s.dimension < 1) r.fail("/dimension", "syntax error", "dimension must be positive");

  const json& bodies = r.field(root, "bodies", "");
  if (!bodies.is_object()) r.fail("/bodies", "syntax error", "bodies is an object of named bodies");
  for (const auto& [name, b] : bodies.items())
    s.bodies.emplace_back(name, r.body(b, "/bodies/" + detail::pointer_token(name), s.dimension));

  if (root.contains("points")) {
    const json& pts = root.at("points");
    if (!pts.is_object()) r.fail("/points", "syntax error", "points is an object of named point lists");
    for (const auto& [name, list] : pts.items()) {
      const std::string path = "/points/" + detail::pointer_token(name);
      if (!list.is_array() || list.empty()) r.fail(path, "syntax error", "expected a nonempty array");
      PointList out;
      if (list[0].is_number()) {
        out.push_back(r.vector(list, path, s.dimension));
      } else {
        for (std::size_t i = 0; i < list.size(); ++i)
          out.push_back(r.vector(list[i], path + "/" + std::to_string(i), s.dimension));
      }
      s.points.emplace_back(name, std::move(out));
    }
  }

  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    if (!t.is_object()) r.fail("/tolerances", "syntax error", "tolerances is an object");
    for (const auto& [key, value] : t.items()) {
      const std::string path = "/tolerances/" + detail::pointer_token(key);
      if (key == "eps_feas")
        s.tolerances.eps_feas = r.positive(value, path);
      else if (key == "eps_margin")
        s.tolerances.eps_margin = r.positive(value, path);
      else if (key == "direction_grid_size")
        s.tolerances.direction_grid_size = r.integer(value, path);
      else if (key == "refine_iters")
        s.tolerances.refine_iters = r.integer(value, path);
      else
        r.fail(path, "syntax error", "unknown tolerance '" + key + "'");
    }
    try {
      s.tolerances.validate();
    } catch (const std::invalid_argument& e) {
      r.fail("/tolerances", "invalid tolerances", e.what());
    }
  }
  if (root.contains("witness")) s.witness = root.at("witness");
  return s;
}

inline json body_json(const Body& b) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        json j;
        if constexpr (std::is_same_v<T, HPolytope>) {
          j["type"] = "polytope";
          j["normals"] = json::array();
          for (int i = 0; i < x.facet_count(); ++i) j["normals"].push_back(detail::vec_json(x.normal(i)));
          j["offsets"] = detail::vec_json(x.offsets());
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["type"] = "ball";
          j["center"] = detail::vec_json(x.center);
          j["radius"] = x.radius;
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          j["type"] = "cone";
          j["base_center"] = detail::vec_json(x.base_center);
          j["base_radius"] = x.base_radius;
          j["apex_height"] = x.apex_height;
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          j["type"] = "product";
          j["factors"] = json::array();
          for (const Body& f : x.factors) j["factors"].push_back(body_json(f));
        } else {
          throw GeometryError("bodies given only by a support function cannot be written to a scene");
        }
        return j;
      },
      b.variant());
}

inline json scene_json(const Scene& s) {
  json j;
  j["dimension"] = s.dimension;
  j["bodies"] = json::object();
  for (const auto& [name, b] : s.bodies) j["bodies"][name] = body_json(b);
  j["points"] = json::object();
  for (const auto& [name, list] : s.points) {
    json a = json::array();
    for (const Vec& x : list) a.push_back(detail::vec_json(x));
    j["points"][name] = a;
  }
  const ToleranceConfig d;
  const ToleranceConfig& t = s.tolerances;
  json tol = json::object();
  if (t.eps_feas != d.eps_feas) tol["eps_feas"] = t.eps_feas;
  if (t.eps_margin != d.eps_margin) tol["eps_margin"] = t.eps_margin;
  if (t.direction_grid_size != d.direction_grid_size) tol["direction_grid_size"] = t.direction_grid_size;
  if (t.refine_iters != d.refine_iters) tol["refine_iters"] = t.refine_iters;
  if (!tol.empty()) j["tolerances"] = tol;
  if (!s.witness.is_null()) j["witness"] = s.witness;
  return j;
}

inline std::string emit_scene(const Scene& s) { return scene_json(s).dump(2) + "\n"; }

}  // namespace strongconv::io
