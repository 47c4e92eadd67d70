#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/polynomial.hpp"
#include "reachkit/reach.hpp"
#include "reachkit/system.hpp"

namespace reachkit {

struct Viewport {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

struct PlotOptions {
  /// Marching-squares cells per side.
  int grid = 800;
  /// Relative padding around the witness bounding box.
  double padding = 0.2;
  /// Pixel size of each of the two panels.
  int panel_size = 500;
  std::optional<Viewport> viewport;
};

/// Square viewport around all bottleneck endpoints and curvature points,
/// padded by `padding` of its side on each side.
inline Viewport witness_viewport(const ReachReport& report, double padding) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto add = [&](const std::vector<double>& p) {
    if (p.size() < 2) return;
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  };
  for (const auto& b : report.bottlenecks) {
    add(b.x);
    add(b.y);
  }
  for (const auto& c : report.curvature_points) add(c.x);
  if (!(xmin <= xmax)) return {};
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  double half = 0.5 * std::max({xmax - xmin, ymax - ymin, 1e-9});
  half *= 1.0 + 2.0 * padding;
  return {cx - half, cx + half, cy - half, cy + half};
}

namespace detail {

struct Segment {
  double x0, y0, x1, y1;
};

// Zero-level segments of the real polynomial f on a grid x grid lattice.
inline std::vector<Segment> marching_squares(const Polynomial& f, const Viewport& vp, int grid) {
  const CompiledSystem compiled(PolySystem({"x", "y"}, {f}));
  auto ws = compiled.make_workspace();
  const int nodes = grid + 1;
  const double dx = (vp.xmax - vp.xmin) / grid, dy = (vp.ymax - vp.ymin) / grid;
  std::vector<double> v(static_cast<std::size_t>(nodes) * nodes);
  std::array<Complex, 2> p;
  std::array<Complex, 1> out;
  for (int j = 0; j < nodes; ++j) {
    for (int i = 0; i < nodes; ++i) {
      p = {Complex(vp.xmin + i * dx), Complex(vp.ymin + j * dy)};
      compiled.evaluate(p, out, {}, ws);
      v[static_cast<std::size_t>(j) * nodes + i] = out[0].real();
    }
  }
  std::vector<Segment> segs;
  auto at = [&](int i, int j) { return v[static_cast<std::size_t>(j) * nodes + i]; };
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      // corners counter-clockwise from bottom-left
      const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      const double cxs[4] = {vp.xmin + i * dx, vp.xmin + (i + 1) * dx, vp.xmin + (i + 1) * dx, vp.xmin + i * dx};
      const double cys[4] = {vp.ymin + j * dy, vp.ymin + j * dy, vp.ymin + (j + 1) * dy, vp.ymin + (j + 1) * dy};
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (c[k] > 0) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;
      // crossing point on edge k (corner k to corner k+1)
      auto cross = [&](int k, double& x, double& y) {
        const int a = k, b = (k + 1) % 4;
        const double t = c[a] / (c[a] - c[b]);
        x = cxs[a] + t * (cxs[b] - cxs[a]);
        y = cys[a] + t * (cys[b] - cys[a]);
      };
      std::vector<int> edges;
      for (int k = 0; k < 4; ++k)
        if (((mask >> k) & 1) != ((mask >> ((k + 1) % 4)) & 1)) edges.push_back(k);
      if (edges.size() == 2) {
        Segment s;
        cross(edges[0], s.x0, s.y0);
        cross(edges[1], s.x1, s.y1);
        segs.push_back(s);
      } else {
        // Saddle: pair edges according to the sign at the cell center.
        const bool center_pos = (c[0] + c[1] + c[2] + c[3]) > 0;
        const bool corner0_pos = c[0] > 0;
        const int pairs[2][2] = {{edges[0], edges[3]}, {edges[1], edges[2]}};
        const int other[2][2] = {{edges[0], edges[1]}, {edges[2], edges[3]}};
        const auto& use = (center_pos == corner0_pos) ? other : pairs;
        for (const auto& pr : use) {
          Segment s;
          cross(pr[0], s.x0, s.y0);
          cross(pr[1], s.x1, s.y1);
          segs.push_back(s);
        }
      }
    }
  }
  return segs;
}

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Two panels side by side: the curve f = 0 with all bottleneck segments
/// (the narrowest in red), and the curve with all critical points of
/// curvature (the maximal one in red).
inline std::string render_svg(const Polynomial& f, const ReachReport& report, const PlotOptions& opts = {}) {
  if (f.nvars() != 2) throw ShapeError("plotting needs a polynomial in 2 variables");
  if (opts.grid < 2 || opts.panel_size < 10) throw DimensionError("plot grid and panel size are too small");
  const Viewport vp = opts.viewport ? *opts.viewport : witness_viewport(report, opts.padding);
  const double size = opts.panel_size;
  const auto sx = [&](double x) { return (x - vp.xmin) / (vp.xmax - vp.xmin) * size; };
  const auto sy = [&](double y) { return size - (y - vp.ymin) / (vp.ymax - vp.ymin) * size; };

  std::string curve;
  for (const auto& s : detail::marching_squares(f, vp, opts.grid))
    curve += "M" + detail::fmt2(sx(s.x0)) + " " + detail::fmt2(sy(s.y0)) + "L" + detail::fmt2(sx(s.x1)) + " " +
             detail::fmt2(sy(s.y1));

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * opts.panel_size << "\" height=\""
      << opts.panel_size << "\" viewBox=\"0 0 " << 2 * opts.panel_size << ' ' << opts.panel_size << "\">\n";
  for (int panel = 0; panel < 2; ++panel) {
    svg << "<g transform=\"translate(" << panel * opts.panel_size << ",0)\">\n";
    svg << "<rect width=\"" << opts.panel_size << "\" height=\"" << opts.panel_size
        << "\" fill=\"white\" stroke=\"#999\"/>\n";
    svg << "<path d=\"" << curve << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (panel == 0) {
      std::size_t narrowest = 0;
      for (std::size_t i = 0; i < report.bottlenecks.size(); ++i)
        if (report.bottlenecks[i].width < report.bottlenecks[narrowest].width) narrowest = i;
      for (std::size_t i = 0; i < report.bottlenecks.size(); ++i) {
        const auto& b = report.bottlenecks[i];
        const char* color = i == narrowest ? "red" : "#3366cc";
        svg << "<line x1=\"" << detail::fmt2(sx(b.x[0])) << "\" y1=\"" << detail::fmt2(sy(b.x[1])) << "\" x2=\""
            << detail::fmt2(sx(b.y[0])) << "\" y2=\"" << detail::fmt2(sy(b.y[1])) << "\" stroke=\"" << color
            << "\" stroke-width=\"" << (i == narrowest ? 2 : 1) << "\"/>\n";
      }
    } else {
      std::size_t extremal = 0;
      for (std::size_t i = 0; i < report.curvature_points.size(); ++i)
        if (report.curvature_points[i].kappa > report.curvature_points[extremal].kappa) extremal = i;
      for (std::size_t i = 0; i < report.curvature_points.size(); ++i) {
        const auto& c = report.curvature_points[i];
        svg << "<circle cx=\"" << detail::fmt2(sx(c.x[0])) << "\" cy=\"" << detail::fmt2(sy(c.x[1])) << "\" r=\""
            << (i == extremal ? 5 : 3) << "\" fill=\"" << (i == extremal ? "red" : "#3366cc") << "\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace reachkit
