#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reachkit/parser.hpp"
#include "reachkit/reach.hpp"

using namespace reachkit;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

PolySystem ellipse_system(double a, double b) {
  // b^2 x^2 + a^2 y^2 - a^2 b^2
  const auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  return PolySystem(kXY, {Complex(b * b) * x * x + Complex(a * a) * y * y - Polynomial::constant(2, a * a * b * b)});
}

// Length of the part of chord tangent to the hypersurface s[0] = 0 at p.
double perpendicularity(const PolySystem& s, const std::vector<double>& p, const std::vector<double>& chord) {
  std::vector<double> g;
  for (std::size_t j = 0; j < s.nvars(); ++j) {
    std::vector<Complex> z(p.begin(), p.end());
    g.push_back(s[0].differentiate(j).evaluate(z).real());
  }
  // component of chord orthogonal to the gradient
  double gg = 0, gc = 0, cc = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    gg += g[j] * g[j];
    gc += g[j] * chord[j];
    cc += chord[j] * chord[j];
  }
  return std::sqrt(std::max(0.0, cc - gc * gc / gg));
}

}  // namespace

TEST(BottleneckSystem, ShapeIsSquare) {
  const auto s = parse_system("vars: x y z\nx^2 + y^2 - 1\nz - x*y");
  const auto b = bottleneck_system(s);
  EXPECT_EQ(b.nvars(), 2 * 3 + 2 * 2u);
  EXPECT_EQ(b.size(), b.nvars());
}

TEST(Bottlenecks, EllipseAxes) {
  const auto pairs = bottlenecks(ellipse_system(2.0, 1.0));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_NEAR(pairs[0].width, 2.0, 1e-10);
  EXPECT_NEAR(pairs[1].width, 4.0, 1e-10);
  EXPECT_NEAR(std::abs(pairs[0].x[1]), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(pairs[1].x[0]), 2.0, 1e-10);
  EXPECT_DOUBLE_EQ(narrowest_bottleneck(pairs), pairs[0].width);
}

TEST(Bottlenecks, EllipseMatchesSweep) {
  const auto widths = oracle::ellipse_bottleneck_widths(2.0, 1.0);
  ASSERT_FALSE(widths.empty());
  const auto pairs = bottlenecks(ellipse_system(2.0, 1.0));
  EXPECT_NEAR(pairs.front().width, widths.front(), 1e-9);
  EXPECT_NEAR(pairs.back().width, widths.back(), 1e-9);
  for (double w : widths) {
    bool found = false;
    for (const auto& p : pairs) found |= std::abs(p.width - w) < 1e-8;
    EXPECT_TRUE(found) << w;
  }
}

TEST(Bottlenecks, SymmetryReductionDoesNotChangeResult) {
  const auto s = parse_system("vars: x y\nx^4 + y^4 + x*y - 3*x^2 - 1");
  GeometryOptions full;
  full.symmetry_reduction = false;
  const auto a = bottlenecks(s), b = bottlenecks(s, full);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].width, b[i].width, 1e-9);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(a[i].x[j], b[i].x[j], 1e-9);
      EXPECT_NEAR(a[i].y[j], b[i].y[j], 1e-9);
    }
  }
}

TEST(Bottlenecks, WitnessesArePerpendicularAndSolveTheSystem) {
  const auto s = parse_system("vars: x y\nx^4 + y^4 + x*y - 3*x^2 - 1");
  const auto b = bottleneck_system(s);
  const auto pairs = bottlenecks(s);
  ASSERT_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    std::vector<double> chord = {p.y[0] - p.x[0], p.y[1] - p.x[1]};
    EXPECT_LT(perpendicularity(s, p.x, chord), 1e-6 * p.width);
    EXPECT_LT(perpendicularity(s, p.y, chord), 1e-6 * p.width);
    EXPECT_NEAR(p.width, std::hypot(chord[0], chord[1]), 1e-12);
    EXPECT_GT(p.width, 0.0);
    std::vector<double> z = p.x;
    z.insert(z.end(), p.y.begin(), p.y.end());
    z.insert(z.end(), p.lambda.begin(), p.lambda.end());
    z.insert(z.end(), p.mu.begin(), p.mu.end());
    EXPECT_LT(b.residual(std::span<const double>(z)), 1e-8);
    EXPECT_LT(p.residual, 1e-8);
  }
  for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_LE(pairs[i - 1].width, pairs[i].width);
}

TEST(Bottlenecks, EachPairReportedOnce) {
  const auto pairs = bottlenecks(ellipse_system(3.0, 1.0));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const bool same = std::hypot(pairs[i].x[0] - pairs[j].y[0], pairs[i].x[1] - pairs[j].y[1]) < 1e-8 &&
                        std::hypot(pairs[i].y[0] - pairs[j].x[0], pairs[i].y[1] - pairs[j].x[1]) < 1e-8;
      EXPECT_FALSE(same);
    }
}

TEST(Bottlenecks, EllipsoidInSpace) {
  // semi-axes 1, 2, 3: three bottlenecks along the axes
  const auto s = parse_system("vars: x y z\n36*x^2 + 9*y^2 + 4*z^2 - 36");
  const auto pairs = bottlenecks(s);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_NEAR(pairs[0].width, 2.0, 1e-9);
  EXPECT_NEAR(pairs[1].width, 4.0, 1e-9);
  EXPECT_NEAR(pairs[2].width, 6.0, 1e-9);
}

TEST(Bottlenecks, CircleIsDegenerate) {
  EXPECT_THROW(bottlenecks(parse_system("vars: x y\nx^2 + y^2 - 1")), DegenerateError);
}

TEST(Bottlenecks, ShapeErrors) {
  EXPECT_THROW(bottlenecks(parse_system("vars: x y\nx - 1\ny - 1")), ShapeError);
}

TEST(Bottlenecks, NarrowestOfNothing) {
  EXPECT_THROW(narrowest_bottleneck({}), NoRealSolutionError);
  BottleneckPair one;
  one.width = 0.7;
  EXPECT_EQ(narrowest_bottleneck({one}), 0.7);
}

TEST(Curvature, AtEllipseVertices) {
  const auto f = ellipse_system(2.0, 1.0)[0];
  EXPECT_NEAR(curvature_at(f, std::vector<double>{2.0, 0.0}), 2.0, 1e-14);
  EXPECT_NEAR(curvature_at(f, std::vector<double>{0.0, 1.0}), 0.25, 1e-14);
}

TEST(Curvature, EllipseCriticalPoints) {
  const auto [sigma, points] = max_curvature(ellipse_system(2.0, 1.0)[0], kXY);
  EXPECT_NEAR(sigma, 2.0, 1e-10);
  ASSERT_EQ(points.size(), 4u);
  const std::vector<std::vector<double>> vertices = {{-2, 0}, {0, -1}, {0, 1}, {2, 0}};
  for (const auto& v : vertices) {
    bool found = false;
    for (const auto& p : points)
      if (std::hypot(p.x[0] - v[0], p.x[1] - v[1]) < 1e-10) {
        found = true;
        EXPECT_NEAR(p.kappa, v[0] != 0 ? 2.0 : 0.25, 1e-10);
        EXPECT_LT(p.residual, 1e-8);
        EXPECT_LT(p.optimality, 1e-6);
      }
    EXPECT_TRUE(found);
  }
}

TEST(Curvature, EllipseMatchesSweep) {
  const auto sweep = oracle::ellipse_curvature_sweep(2.0, 1.0);
  const auto [sigma, points] = max_curvature(ellipse_system(2.0, 1.0)[0], kXY);
  EXPECT_NEAR(sigma, sweep.kmax, 1e-6);
  double kmin = INFINITY;
  for (const auto& p : points) kmin = std::min(kmin, p.kappa);
  EXPECT_NEAR(kmin, sweep.kmin, 1e-6);
}

TEST(Curvature, RandomEllipses) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int k = 0; k < 10; ++k) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 0.05) continue;
    const auto [sigma, points] = max_curvature(ellipse_system(a, b)[0], kXY);
    const double expected = std::max(a / (b * b), b / (a * a));
    EXPECT_NEAR(sigma / expected, 1.0, 1e-6) << a << " " << b;
  }
}

TEST(Curvature, PointsSatisfyOptimality) {
  const auto f = parse_system("vars: x y\nx^4 + y^4 + x*y - 3*x^2 - 1")[0];
  const auto [sigma, points] = max_curvature(f, kXY);
  ASSERT_FALSE(points.empty());
  double best = 0;
  for (const auto& p : points) {
    EXPECT_LT(p.residual, 1e-8);
    EXPECT_LT(p.optimality, 1e-6);
    EXPECT_GE(p.kappa, 0.0);
    EXPECT_NEAR(p.kappa, curvature_at(f, p.x), 1e-9 * (1 + p.kappa));
    best = std::max(best, p.kappa);
  }
  EXPECT_EQ(best, sigma);
}

TEST(Curvature, CircleIsDegenerate) {
  EXPECT_THROW(curvature_system(parse_system("vars: x y\nx^2 + y^2 - 4")[0], kXY), DegenerateError);
  EXPECT_THROW(max_curvature(parse_system("vars: x y\nx^2 + y^2 - 1")[0], kXY), DegenerateError);
}

TEST(Curvature, SystemErrors) {
  EXPECT_THROW(curvature_system(Polynomial::constant(2, 3.0), kXY), ShapeError);
  EXPECT_THROW(curvature_system(parse_system("vars: x y z\nx + y + z")[0], {"x", "y", "z"}), ShapeError);
}

TEST(Curvature, SystemHasCurveAndCondition) {
  const auto s = curvature_system(ellipse_system(2.0, 1.0)[0], kXY);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], ellipse_system(2.0, 1.0)[0]);
  // the vertices solve the condition
  for (const auto& v : std::vector<std::vector<Complex>>{{2.0, 0.0}, {0.0, 1.0}})
    EXPECT_LT(std::abs(s[1].evaluate(v)), 1e-10);
  // a generic point of the ellipse does not
  const double t = 0.7;
  EXPECT_GT(std::abs(s[1].evaluate(std::vector<Complex>{2 * std::cos(t), std::sin(t)})), 1e-3);
}

TEST(Curvature, NoRealCurve) {
  EXPECT_THROW(max_curvature(parse_system("vars: x y\nx^2 + 2*y^2 + 1")[0], kXY), NoRealSolutionError);
}

TEST(Reach, Ellipse) {
  const auto r = reach(ellipse_system(2.0, 1.0));
  ASSERT_TRUE(r.rho && r.sigma && r.tau);
  EXPECT_NEAR(*r.rho, 2.0, 1e-10);
  EXPECT_NEAR(*r.sigma, 2.0, 1e-10);
  EXPECT_NEAR(*r.tau, 0.5, 1e-10);
  EXPECT_EQ(*r.tau, std::min(1.0 / *r.sigma, *r.rho / 2.0));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Reach, ScalingLaw) {
  // (2x)^2 + 4(2y)^2 - 4 is the ellipse shrunk by 2
  const auto base = reach(ellipse_system(2.0, 1.0));
  const auto small = reach(parse_system("vars: x y\n(2*x)^2 + 4*(2*y)^2 - 4"));
  EXPECT_NEAR(*small.tau, 0.25, 1e-10);
  EXPECT_NEAR(*small.rho * 2.0 / *base.rho, 1.0, 1e-6);
  EXPECT_NEAR((1.0 / *small.sigma) * 2.0 / (1.0 / *base.sigma), 1.0, 1e-6);
  EXPECT_NEAR(*small.tau * 2.0 / *base.tau, 1.0, 1e-6);
}

TEST(Reach, ScalingLawOnQuartic) {
  const double lambda = 3.0;
  const auto base = reach(parse_system("vars: x y\nx^4 + y^4 + x*y - 3*x^2 - 1"));
  const auto scaled = reach(parse_system("vars: x y\nx^4 + y^4 + 9*x*y - 27*x^2 - 81"));
  ASSERT_TRUE(base.tau && scaled.tau);
  EXPECT_NEAR(*scaled.rho / (lambda * *base.rho), 1.0, 1e-6);
  EXPECT_NEAR(*base.sigma / (lambda * *scaled.sigma), 1.0, 1e-6);
  EXPECT_NEAR(*scaled.tau / (lambda * *base.tau), 1.0, 1e-6);
}

TEST(Reach, CircleIsDegenerate) {
  EXPECT_THROW(reach(parse_system("vars: x y\nx^2 + y^2 - 1")), DegenerateError);
}

TEST(Reach, NonPlanarGivesRhoOnly) {
  const auto r = reach(parse_system("vars: x y z\n36*x^2 + 9*y^2 + 4*z^2 - 36"));
  ASSERT_TRUE(r.rho);
  EXPECT_NEAR(*r.rho, 2.0, 1e-9);
  EXPECT_FALSE(r.sigma);
  EXPECT_FALSE(r.tau);
  EXPECT_FALSE(r.warnings.empty());
}
