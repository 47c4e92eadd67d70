#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reachkit/errors.hpp"
#include "reachkit/homotopy.hpp"
#include "reachkit/io.hpp"
#include "reachkit/parser.hpp"
#include "reachkit/reach.hpp"
#include "reachkit/sampler.hpp"
#include "reachkit/svg.hpp"

namespace reachkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Systems available by name instead of a file path. "cyclooctane" is
/// generated from --c2 instead.
inline const std::map<std::string, std::string>& builtin_models() {
  static const std::map<std::string, std::string> models = {
      {"fig2_curve", "vars: x y\n(x^3 - x*y^2 + y + 1)^2*(x^2 + y^2 - 1) + y^2 - 5\n"},
      {"ellipse", "vars: x y\nx^2 + 4*y^2 - 4\n"},
      {"circle", "vars: x y\nx^2 + y^2 - 1\n"},
      {"circle_line", "vars: x y\nx^2 + y^2 - 1\nx - y\n"},
  };
  return models;
}

/// Failures that are not the library's: bad files, bad flags.
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "IOError"; }
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string format;
  std::string query;
  std::string report;
  TrackerOptions tracker;
  std::size_t slices = 10;
  double c2 = 2.0;
  int dim = -1;
  bool progress = false;
  bool no_symmetry = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PolySystem load_system(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("missing input: a system file or one of fig2_curve, ellipse, circle, "
                                          "circle_line, cyclooctane");
  if (cfg.input == "cyclooctane") return build_cyclooctane(std::sqrt(cfg.c2)).reduced;
  const auto& models = builtin_models();
  if (auto it = models.find(cfg.input); it != models.end()) return parse_system(it->second);
  return parse_system(read_file(cfg.input));
}

inline std::vector<double> parse_query(const std::string& text) {
  std::vector<double> q;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size() || !std::isfinite(v)) throw UsageError("bad query coordinate '" + item + "'");
    q.push_back(v);
  }
  if (q.empty()) throw UsageError("--query needs comma-separated coordinates");
  return q;
}

inline std::string output_format(const RunConfig& cfg) {
  if (!cfg.format.empty()) return cfg.format;
  const auto dot = cfg.output.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = cfg.output.substr(dot + 1);
    if (ext == "csv" || ext == "svg" || ext == "json") return ext;
  }
  return cfg.command == "plot" ? "svg" : "json";
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw IoError("cannot write '" + cfg.output + "'");
  file << text;
  if (!file) throw IoError("failed writing '" + cfg.output + "'");
}

inline std::string cloud_text(const PointCloud& cloud, const std::string& format) {
  if (format == "csv") {
    std::ostringstream ss;
    write_csv(ss, cloud);
    return ss.str();
  }
  return to_json(cloud).dump(2) + "\n";
}

// Reads the witnesses back from a reach report for plotting.
inline ReachReport report_from_json(const Json& j) {
  ReachReport r;
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  r.rho = opt("rho");
  r.sigma = opt("sigma");
  r.tau = opt("tau");
  for (const auto& b : j.value("bottlenecks", Json::array())) {
    BottleneckPair p;
    p.x = b.at("x").get<std::vector<double>>();
    p.y = b.at("y").get<std::vector<double>>();
    p.width = b.at("width").get<double>();
    r.bottlenecks.push_back(std::move(p));
  }
  for (const auto& c : j.value("curvature_points", Json::array())) {
    CurvaturePoint p;
    p.x = c.at("x").get<std::vector<double>>();
    p.kappa = c.at("kappa").get<double>();
    r.curvature_points.push_back(std::move(p));
  }
  return r;
}

inline void require_format(const std::string& format, std::initializer_list<const char*> allowed,
                           const std::string& command) {
  for (const char* a : allowed)
    if (format == a) return;
  throw UsageError("format '" + format + "' is not available for " + command);
}

}  // namespace detail

/// Runs one command. Results go to `out` (or the -o file), diagnostics and
/// error JSON to `err`. Returns 0, 1 (usage) or 2 (numerical failure).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Homotopy continuation solver, variety sampler and reach calculator", "reach-kit"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", cfg.input, "system file or builtin model name")->required();
    sub->add_option("--seed", cfg.tracker.seed, "random seed")->capture_default_str();
    sub->add_option("--workers", cfg.tracker.workers, "path-tracking threads")->capture_default_str();
    sub->add_option("--tol-newton", cfg.tracker.newton_tol, "corrector tolerance")->capture_default_str();
    sub->add_option("--tol-final", cfg.tracker.final_refine_tol, "endpoint refinement tolerance")
        ->capture_default_str();
    sub->add_option("--dedupe-tol", cfg.tracker.dedupe_tol, "endpoint deduplication distance")
        ->capture_default_str();
    sub->add_option("--real-tol", cfg.tracker.real_tol, "imaginary part counted as zero")->capture_default_str();
    sub->add_option("--max-steps", cfg.tracker.max_steps, "steps per path")->capture_default_str();
    sub->add_option("--step-init", cfg.tracker.step_initial, "initial step")->capture_default_str();
    sub->add_option("--step-min", cfg.tracker.step_min, "smallest step")->capture_default_str();
    sub->add_option("--step-max", cfg.tracker.step_max, "largest step")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    sub->add_flag("--progress", cfg.progress, "print a path counter on stderr");
  };
  struct Command {
    const char* name;
    const char* help;
    bool needs_input;
  };
  const Command commands[] = {
      {"solve", "all isolated complex solutions of a square system", true},
      {"sample-slice", "real points of a variety cut by random affine slices", true},
      {"sample-nearest", "point of a variety nearest to --query", true},
      {"cyclooctane", "slice samples of the cyclooctane conformation space", false},
      {"bottlenecks", "bottleneck pairs of a variety", true},
      {"curvature", "critical points of curvature of a plane curve", true},
      {"reach", "reach from bottlenecks and maximal curvature", true},
      {"plot", "SVG of a plane curve with its bottlenecks and curvature points", true},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, c.needs_input);
    const std::string name = c.name;
    if (name == "sample-slice" || name == "cyclooctane")
      sub->add_option("--slices", cfg.slices, "number of slices")->capture_default_str();
    if (name == "sample-slice") sub->add_option("--dim", cfg.dim, "variety dimension (default n - #equations)");
    if (name == "cyclooctane" || name == "sample-slice" || name == "solve")
      sub->add_option("--c2", cfg.c2, "squared bond length of the cyclooctane model")->capture_default_str();
    if (name == "sample-nearest") sub->add_option("--query", cfg.query, "comma-separated point")->required();
    if (name == "bottlenecks" || name == "reach" || name == "plot")
      sub->add_flag("--no-symmetry", cfg.no_symmetry, "track both paths of every swap-symmetric pair");
    if (name == "plot") sub->add_option("--report", cfg.report, "reach JSON to plot instead of recomputing");
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", e.what()).dump() << "\n";
    return kExitUsage;
  }

  try {
    cfg.tracker.validate();
    if (!(cfg.c2 > 0.0)) throw UsageError("--c2 must be positive");
    const std::string format = detail::output_format(cfg);
    ProgressFn progress;
    if (cfg.progress)
      progress = [&err](std::uint64_t done, std::uint64_t total) {
        if (done == total || done % 1000 == 0) err << "\rpaths " << done << "/" << total << (done == total ? "\n" : "");
      };
    GeometryOptions geo;
    geo.tracker = cfg.tracker;
    geo.symmetry_reduction = !cfg.no_symmetry;

    if (cfg.command == "cyclooctane") {
      detail::require_format(format, {"json", "csv"}, cfg.command);
      const auto model = build_cyclooctane(std::sqrt(cfg.c2));
      const PointCloud cloud = sample_cyclooctane(model, cfg.slices, cfg.tracker, progress);
      for (const auto& w : cloud.warnings) err << "warning: " << w << "\n";
      detail::emit(cfg, detail::cloud_text(cloud, format), out);
      return kExitOk;
    }
    const PolySystem system = detail::load_system(cfg);
    if (cfg.command == "solve") {
      detail::require_format(format, {"json"}, cfg.command);
      detail::emit(cfg, to_json(solve_all(system, cfg.tracker, progress)).dump(2) + "\n", out);
    } else if (cfg.command == "sample-slice") {
      detail::require_format(format, {"json", "csv"}, cfg.command);
      if (cfg.dim == 0 || cfg.dim < -1) throw UsageError("--dim must be positive");
      const std::size_t dim =
          cfg.dim > 0 ? static_cast<std::size_t>(cfg.dim)
                      : (system.nvars() > system.size() ? system.nvars() - system.size() : 0);
      const PointCloud cloud = slice_sample(system, dim, cfg.slices, cfg.tracker, progress);
      for (const auto& w : cloud.warnings) err << "warning: " << w << "\n";
      detail::emit(cfg, detail::cloud_text(cloud, format), out);
    } else if (cfg.command == "sample-nearest") {
      detail::require_format(format, {"json"}, cfg.command);
      const auto q = detail::parse_query(cfg.query);
      detail::emit(cfg, to_json(nearest_point(system, q, cfg.tracker, progress)).dump(2) + "\n", out);
    } else if (cfg.command == "bottlenecks") {
      detail::require_format(format, {"json"}, cfg.command);
      ReachReport r;
      r.bottlenecks = bottlenecks(system, geo, progress);
      if (r.bottlenecks.empty())
        r.warnings.push_back("no real bottlenecks found");
      else
        r.rho = narrowest_bottleneck(r.bottlenecks);
      Json j = to_json(r);
      j.erase("sigma");
      j.erase("tau");
      j.erase("curvature_points");
      detail::emit(cfg, j.dump(2) + "\n", out);
    } else if (cfg.command == "curvature") {
      detail::require_format(format, {"json"}, cfg.command);
      if (system.size() != 1 || system.nvars() != 2) throw ShapeError("curvature needs one equation in 2 variables");
      auto [sigma, points] = max_curvature(system[0], system.var_names(), geo, progress);
      Json pts = Json::array();
      for (const auto& p : points) pts.push_back(to_json(p));
      detail::emit(cfg, Json{{"sigma", sigma}, {"curvature_points", pts}}.dump(2) + "\n", out);
    } else if (cfg.command == "reach") {
      detail::require_format(format, {"json"}, cfg.command);
      const ReachReport r = reach(system, geo, progress);
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      detail::emit(cfg, to_json(r).dump(2) + "\n", out);
    } else if (cfg.command == "plot") {
      detail::require_format(format, {"svg"}, cfg.command);
      if (system.size() != 1 || system.nvars() != 2) throw ShapeError("plot needs one equation in 2 variables");
      ReachReport r;
      if (!cfg.report.empty()) {
        try {
          r = detail::report_from_json(Json::parse(detail::read_file(cfg.report)));
        } catch (const nlohmann::json::exception& e) {
          throw UsageError(std::string("bad report file: ") + e.what());
        }
      } else {
        r = reach(system, geo, progress);
      }
      detail::emit(cfg, render_svg(system[0], r), out);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what()).dump() << "\n";
    return e.numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << error_json("Error", e.what()).dump() << "\n";
    return kExitUsage;
  }
}

}  // namespace reachkit::cli
