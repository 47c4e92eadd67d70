// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// every line passes. The cyclooctane check uses 3 slices unless --slices or
// REACHKIT_CYCLOOCTANE_SLICES asks for more (100 for the full run).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "random_systems.hpp"
#include "reachkit/cli.hpp"

using namespace reachkit;

namespace {

constexpr double kFig2Width = 0.138;
constexpr double kFig2WidthTol = 0.002;
constexpr double kFig2Curvature = 2097.17;
constexpr double kFig2CurvatureRelTol = 0.01;
constexpr double kEllipseTol = 1e-6;
constexpr double kResidualTol = 1e-8;
constexpr double kOracleMatchTol = 1e-6;
constexpr int kRandomSystems = 24;
constexpr std::size_t kFullSlices = 100;
constexpr std::size_t kFullMinPoints = 100;

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "reach-kit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

void report(int id, const std::string& name, const Verdict& v, double seconds, const std::string& summary) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << summary;
  if (!v.detail.empty()) std::cout << " [" << v.detail << "]";
  if (seconds >= 0) std::cout << " (" << fmt(std::round(seconds * 10) / 10) << " s)";
  std::cout << std::endl;
}

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Primary outputs of criteria 1 to 5 for one worker count.
struct Outputs {
  Run fig2, ellipse, cyclooctane;
  std::string random_systems;
  double fig2_seconds = 0, cyclooctane_seconds = 0;
};

std::string solve_random_systems(int workers, Verdict* v) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> nd(1, 3), dd(1, 3);
  std::string all;
  for (int trial = 0; trial < kRandomSystems; ++trial) {
    std::vector<std::uint32_t> degrees(nd(rng));
    for (auto& d : degrees) d = dd(rng);
    const auto s = testing_support::random_dense_system(rng, degrees);
    TrackerOptions o;
    o.seed = 500 + trial;
    o.workers = workers;
    const auto set = solve_all(s, o);
    all += to_json(set).dump() + "\n";
    if (!v) continue;
    const std::string tag = "system " + std::to_string(trial);
    v->require(set.solutions.size() == bezout_number(s),
               tag + " has " + std::to_string(set.solutions.size()) + " of " + std::to_string(bezout_number(s)));
    for (const auto& sol : set.solutions) v->require(sol.residual < kResidualTol, tag + " residual " + fmt(sol.residual));
    if (s.nvars() <= 2) {
      std::vector<std::vector<Complex>> found;
      for (const auto& sol : set.solutions) found.push_back(sol.point);
      const auto expected = testing_support::oracle_roots(s);
      v->require(expected.size() == found.size() && oracle::matches(expected, found, kOracleMatchTol) &&
                     oracle::matches(found, expected, kOracleMatchTol),
                 tag + " disagrees with elimination");
    }
  }
  return all;
}

Outputs primary_outputs(int workers, std::size_t slices) {
  const std::string w = std::to_string(workers);
  Outputs o;
  auto t = std::chrono::steady_clock::now();
  o.fig2 = invoke({"reach", "fig2_curve", "--workers", w});
  o.fig2_seconds = elapsed(t);
  o.ellipse = invoke({"reach", "ellipse", "--workers", w});
  o.random_systems = solve_random_systems(workers, nullptr);
  t = std::chrono::steady_clock::now();
  o.cyclooctane = invoke({"cyclooctane", "--c2", "2", "--slices", std::to_string(slices), "--workers", w});
  o.cyclooctane_seconds = elapsed(t);
  return o;
}

// Squared distances of the ring straight from the 24 coordinates.
double ring_residual(const std::vector<double>& x, double c2) {
  double worst = 0;
  for (std::size_t offset : {1u, 2u}) {
    const double target = offset == 1 ? c2 : 8.0 / 3.0 * c2;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t j = (i + offset) % 8;
      double d2 = 0;
      for (std::size_t k = 0; k < 3; ++k) d2 += std::pow(x[3 * i + k] - x[3 * j + k], 2);
      worst = std::max(worst, std::abs(d2 - target));
    }
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t slices = 3;
  if (const char* env = std::getenv("REACHKIT_CYCLOOCTANE_SLICES")) slices = std::stoul(env);
  int alt_workers = 3;
  CLI::App app{"acceptance checks"};
  app.add_option("--slices", slices, "cyclooctane slices (100 for the full run)")->capture_default_str();
  app.add_option("--workers", alt_workers, "worker count compared against 1 for determinism")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  const Outputs base = primary_outputs(1, slices);
  std::chrono::steady_clock::time_point t;

  Json fig2;
  {
    Verdict v;
    double rho = NAN;
    v.require(base.fig2.code == 0, "reach exited " + std::to_string(base.fig2.code) + " " + base.fig2.err);
    if (base.fig2.code == 0) {
      fig2 = Json::parse(base.fig2.out);
      v.require(fig2["rho"].is_number(), "no rho");
      if (fig2["rho"].is_number()) rho = fig2["rho"].get<double>();
      v.require(std::abs(rho - kFig2Width) <= kFig2WidthTol, "width off");
    }
    report(1, "fig2_curve bottleneck", v, base.fig2_seconds, "rho = " + fmt(rho) + ", expected " + fmt(kFig2Width) + " +- " + fmt(kFig2WidthTol));
    all &= v.pass;
  }
  {
    Verdict v;
    double sigma = NAN, tau = NAN, rho = NAN;
    if (base.fig2.code == 0 && fig2["sigma"].is_number() && fig2["tau"].is_number()) {
      sigma = fig2["sigma"].get<double>();
      tau = fig2["tau"].get<double>();
      rho = fig2["rho"].get<double>();
      v.require(std::abs(sigma / kFig2Curvature - 1.0) <= kFig2CurvatureRelTol, "curvature off");
      v.require(tau == 1.0 / sigma, "tau is not 1/sigma");
      v.require(1.0 / sigma <= rho / 2.0, "bottleneck branch wins");
    } else {
      v.require(false, "no sigma or tau");
    }
    report(2, "fig2_curve curvature", v, -1.0,
           "sigma = " + fmt(sigma) + ", tau = " + fmt(tau) + ", 1/sigma = " + fmt(1.0 / sigma));
    all &= v.pass;
  }
  {
    t = std::chrono::steady_clock::now();
    Verdict v;
    double rho = NAN, sigma = NAN, tau = NAN;
    v.require(base.ellipse.code == 0, "reach exited " + std::to_string(base.ellipse.code));
    if (base.ellipse.code == 0) {
      const auto j = Json::parse(base.ellipse.out);
      rho = j["rho"].get<double>();
      sigma = j["sigma"].get<double>();
      tau = j["tau"].get<double>();
      // semi-axes 2 and 1: the narrowest chord is the minor axis, curvature peaks at (+-2, 0)
      v.require(std::abs(rho - 2.0) <= kEllipseTol, "rho off");
      v.require(std::abs(sigma - 2.0) <= kEllipseTol, "sigma off");
      v.require(std::abs(tau - 0.5) <= kEllipseTol, "tau off");
      const auto widths = oracle::ellipse_bottleneck_widths(2.0, 1.0);
      v.require(!widths.empty() && std::abs(widths.front() - rho) <= kEllipseTol, "sweep width disagrees");
      v.require(std::abs(oracle::ellipse_curvature_sweep(2.0, 1.0).kmax - sigma) <= kEllipseTol,
                "sweep curvature disagrees");
    }
    report(3, "ellipse oracle", v, elapsed(t), "rho = " + fmt(rho) + ", sigma = " + fmt(sigma) + ", tau = " + fmt(tau));
    all &= v.pass;
  }
  {
    t = std::chrono::steady_clock::now();
    Verdict v;
    solve_random_systems(1, &v);
    report(4, "Bezout completeness", v, elapsed(t),
           std::to_string(kRandomSystems) + " random dense systems, n <= 3, degrees <= 3");
    all &= v.pass;
  }
  {
    Verdict v;
    std::size_t points = 0;
    double worst = 0;
    v.require(base.cyclooctane.code == 0, "cyclooctane exited " + std::to_string(base.cyclooctane.code));
    if (base.cyclooctane.code == 0) {
      const auto j = Json::parse(base.cyclooctane.out);
      points = j["points"].size();
      for (const auto& p : j["points"]) {
        const auto x = p.get<std::vector<double>>();
        v.require(x.size() == 24, "point is not in R^24");
        if (x.size() == 24) worst = std::max(worst, ring_residual(x, 2.0));
      }
      v.require(worst < kResidualTol, "residual " + fmt(worst));
      v.require(points > 0, "no points");
      if (slices >= kFullSlices) v.require(points >= kFullMinPoints, "fewer than " + std::to_string(kFullMinPoints) + " points");
    }
    report(5, "cyclooctane sampling", v, base.cyclooctane_seconds,
           std::to_string(slices) + " slices, " + std::to_string(points) + " points, max residual " + fmt(worst));
    all &= v.pass;
  }
  {
    t = std::chrono::steady_clock::now();
    const Outputs other = primary_outputs(alt_workers, slices);
    Verdict v;
    v.require(base.fig2.out == other.fig2.out, "fig2_curve report differs");
    v.require(base.ellipse.out == other.ellipse.out, "ellipse report differs");
    v.require(base.random_systems == other.random_systems, "random system solutions differ");
    v.require(base.cyclooctane.out == other.cyclooctane.out, "cyclooctane cloud differs");
    report(6, "determinism", v, elapsed(t), "criteria 1-5 outputs with 1 and " + std::to_string(alt_workers) + " workers");
    all &= v.pass;
  }
  {
    t = std::chrono::steady_clock::now();
    Verdict v;
    const Run r = invoke({"reach", "circle"});
    v.require(r.code == cli::kExitNumerical, "exit code " + std::to_string(r.code));
    v.require(r.out.empty(), "printed a report");
    std::string kind;
    try {
      kind = Json::parse(r.err)["error"].get<std::string>();
    } catch (const std::exception&) {
      kind = "unparseable";
    }
    v.require(kind == "Degenerate", "error kind " + kind);
    report(7, "degeneracy guard", v, elapsed(t), "unit circle: exit " + std::to_string(r.code) + ", " + kind);
    all &= v.pass;
  }
  return all ? 0 : 1;
}
