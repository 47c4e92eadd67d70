#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reachkit/homotopy.hpp"
#include "reachkit/reach.hpp"
#include "reachkit/sampler.hpp"

namespace reachkit {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const SolutionSet& set) {
  Json sols = Json::array();
  for (const auto& s : set.solutions) {
    std::vector<double> re, im;
    for (const auto& z : s.point) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    sols.push_back({{"point_re", re}, {"point_im", im}, {"residual", s.residual}, {"is_real", s.is_real}});
  }
  return {{"solutions", sols},
          {"diverged", set.diverged_count},
          {"failed", set.failed_count},
          {"bezout", set.bezout},
          {"seed", set.seed}};
}

inline Json to_json(const BottleneckPair& b) {
  return {{"x", b.x}, {"y", b.y}, {"lambda", b.lambda}, {"mu", b.mu}, {"width", b.width}, {"residual", b.residual}};
}

inline Json to_json(const CurvaturePoint& c) {
  return {{"x", c.x}, {"kappa", c.kappa}, {"residual", c.residual}, {"optimality", c.optimality}};
}

inline Json to_json(const ReachReport& r) {
  Json bottlenecks = Json::array();
  for (const auto& b : r.bottlenecks) bottlenecks.push_back(to_json(b));
  Json points = Json::array();
  for (const auto& c : r.curvature_points) points.push_back(to_json(c));
  return {{"rho", detail::optional_number(r.rho)},
          {"sigma", detail::optional_number(r.sigma)},
          {"tau", detail::optional_number(r.tau)},
          {"bottlenecks", bottlenecks},
          {"curvature_points", points},
          {"warnings", r.warnings}};
}

inline Json to_json(const PointCloud& cloud) {
  return {{"var_names", cloud.var_names},
          {"points", cloud.points},
          {"residuals", cloud.residuals},
          {"provenance", cloud.provenance},
          {"skipped_slices", cloud.skipped_slices},
          {"warnings", cloud.warnings}};
}

inline Json to_json(const NearestPoint& p) {
  return {{"point", p.point}, {"distance", p.distance}, {"residual", p.residual}};
}

inline Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

/// One row per point: the coordinates, then the residual, at 17
/// significant digits.
inline void write_csv(std::ostream& out, const PointCloud& cloud) {
  for (const auto& name : cloud.var_names) out << name << ',';
  out << "residual\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (double v : cloud.points[i]) out << detail::format_double(v) << ',';
    out << detail::format_double(cloud.residuals[i]) << '\n';
  }
}

}  // namespace reachkit
