// strongconv: command-line front end for strong hulls, covering checks and
// the explicit witness constructions.

#include <strongconv/io/commands.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

strongconv::Vec parse_point(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad coordinate '" + item + "'");
    xs.push_back(v);
  }
  if (xs.empty()) throw std::invalid_argument("empty point");
  strongconv::Vec p(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) p(static_cast<Eigen::Index>(i)) = xs[i];
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  using strongconv::io::CommandOptions;
  CLI::App app{"Strongly convex hulls, Caratheodory subsets and covering witnesses"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string point_text;
  std::string svg_path;
  std::string scene_path;
  double tol_margin = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scene", scene_path, "scene file (JSON)");
    sub->add_option("--point", point_text, "test point, comma separated");
    sub->add_option("--out", opt.out, "write the scene or figure here");
    sub->add_option("--svg", svg_path, "write an SVG figure (no value: to stdout)")->expected(0, 1);
    sub->add_option("--tol-margin", tol_margin, "override the separation margin");
    sub->add_flag("--json", opt.json, "print the report as JSON");
  };

  for (const char* name : {"hull", "member", "cara", "helly", "summand"}) common(app.add_subcommand(name));
  auto* gen = app.add_subcommand("gen-test", "two-vector generating-set test");
  common(gen);
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--samples", opt.samples, "pairs to test");
  auto* crit = app.add_subcommand("criterion2d", "planar acyclicity criterion");
  common(crit);
  crit->add_option("--grid", opt.grid, "translate grid resolution");
  auto* wit = app.add_subcommand("witness", "build an explicit witness scene");
  common(wit);
  wit->add_option("kind", opt.witness_kind, "cone | lower-bound | product")->required();
  wit->add_option("--m", opt.m, "polygon size for the cone witness");
  wit->add_option("--apex-height", opt.apex_height, "cone apex height");
  wit->add_option("--dim", opt.dim, "dimension for the lower-bound witness");
  wit->add_option("--gauge", opt.gauge, "cube | cross | ball");
  wit->add_option("--factors", opt.factors, "factor dimensions of a product witness")->delimiter(',')->expected(2);
  wit->add_option("--seed", opt.seed, "unused; accepted for symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : strongconv::io::exit_input;
  }

  CLI::App* sub = app.get_subcommands().front();
  opt.command = sub->get_name();
  if (!scene_path.empty()) opt.scene_path = scene_path;
  if (sub->count("--svg")) opt.svg = svg_path.empty() ? "-" : svg_path;
  if (sub->count("--tol-margin")) opt.tol_margin = tol_margin;
  if (!point_text.empty()) {
    try {
      opt.point = parse_point(point_text);
    } catch (const std::exception& e) {
      std::cerr << "error: --point: " << e.what() << "\n";
      return strongconv::io::exit_input;
    }
  }

  const auto res = strongconv::io::run_command(opt);
  (res.exit_code == strongconv::io::exit_input || res.exit_code == strongconv::io::exit_failure ? std::cerr : std::cout)
      << res.output;
  return res.exit_code;
}
