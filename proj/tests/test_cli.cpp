#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "reachkit/cli.hpp"

using namespace reachkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "reach-kit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(REACHKIT_MODELS_DIR) + "/" + name + ".sys"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("reachkit_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("reach"), std::string::npos);
  EXPECT_EQ(invoke({"reach", "--help"}).code, cli::kExitOk);
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"frobnicate"},
           {"solve", model("circle_line"), "--no-such-flag"},
           {"solve"},
           {"solve", model("circle_line"), "--workers", "many"},
           {"solve", model("circle_line"), "--format", "xml"},
           {"sample-nearest", model("ellipse")},
           {"sample-nearest", model("ellipse"), "--query", "1,abc"},
           {"solve", model("circle_line"), "--step-min", "-1"},
           {"solve", model("circle_line"), "--format", "svg"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, cli::kExitUsage) << args[0];
    EXPECT_NE(r.err.find("\"error\""), std::string::npos) << r.err;
  }
}

TEST(Cli, MissingInputIsIoError) {
  const auto r = invoke({"solve", "/nonexistent/system.sys"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  const auto j = Json::parse(r.err);
  EXPECT_EQ(j["error"], "IOError");
}

TEST(Cli, ParseErrorInFile) {
  const auto r = invoke({"solve", "not a system"});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST(Cli, UnwritableOutput) {
  const auto r = invoke({"solve", model("circle_line"), "-o", "/nonexistent/dir/out.json"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_EQ(Json::parse(r.err)["error"], "IOError");
}

TEST(Cli, CircleReachIsDegenerate) {
  const auto r = invoke({"reach", model("circle")});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_EQ(Json::parse(r.err)["error"], "Degenerate");
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, SolveJson) {
  const auto r = invoke({"solve", model("circle_line")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["solutions"].size(), 2u);
  EXPECT_EQ(j["bezout"], 2);
  for (const auto& s : j["solutions"]) {
    EXPECT_TRUE(s["is_real"].get<bool>());
    EXPECT_NEAR(std::abs(s["point_re"][0].get<double>()), std::sqrt(0.5), 1e-12);
    EXPECT_LT(s["residual"].get<double>(), 1e-8);
  }
}

TEST(Cli, BuiltinModelName) {
  const auto a = invoke({"solve", "circle_line"});
  const auto b = invoke({"solve", model("circle_line")});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EllipseReachJson) {
  const auto r = invoke({"reach", model("ellipse")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["rho"].get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(j["sigma"].get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(j["tau"].get<double>(), 0.5, 1e-10);
  EXPECT_EQ(j["bottlenecks"].size(), 2u);
  EXPECT_EQ(j["curvature_points"].size(), 4u);
}

TEST(Cli, BottlenecksAndCurvatureCommands) {
  const auto b = Json::parse(invoke({"bottlenecks", model("ellipse")}).out);
  EXPECT_NEAR(b["rho"].get<double>(), 2.0, 1e-10);
  EXPECT_FALSE(b.contains("sigma"));
  const auto c = Json::parse(invoke({"curvature", model("ellipse")}).out);
  EXPECT_NEAR(c["sigma"].get<double>(), 2.0, 1e-10);
  EXPECT_FALSE(c.contains("rho"));
  EXPECT_EQ(invoke({"curvature", model("circle_line")}).code, cli::kExitUsage);
}

TEST(Cli, SampleNearest) {
  const auto r = invoke({"sample-nearest", model("ellipse"), "--query", "0,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["distance"].get<double>(), 2.0, 1e-10);
  EXPECT_EQ(invoke({"sample-nearest", model("ellipse"), "--query", "1,2,3"}).code, cli::kExitUsage);
}

TEST_F(TempDir, SampleSliceFormatFromExtension) {
  const auto csv = dir / "cloud.csv";
  ASSERT_EQ(invoke({"sample-slice", model("ellipse"), "--slices", "3", "-o", csv.string()}).code, 0);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("x,y,residual\n", 0), 0u) << text;
  std::istringstream lines(text);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 6);

  const auto json = dir / "cloud.json";
  ASSERT_EQ(invoke({"sample-slice", model("ellipse"), "--slices", "3", "-o", json.string()}).code, 0);
  const auto j = Json::parse(slurp(json));
  EXPECT_EQ(j["points"].size(), 6u);
  EXPECT_EQ(j["residuals"].size(), 6u);
}

TEST_F(TempDir, PlotWritesSvg) {
  const auto svg = dir / "ellipse.svg";
  ASSERT_EQ(invoke({"plot", model("ellipse"), "-o", svg.string()}).code, 0);
  const std::string text = slurp(svg);
  EXPECT_EQ(text.rfind("<svg", 0), 0u);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
  EXPECT_NE(text.find("<line"), std::string::npos);
}

TEST_F(TempDir, PlotFromReport) {
  const auto report = dir / "report.json";
  ASSERT_EQ(invoke({"reach", model("ellipse"), "-o", report.string()}).code, 0);
  const auto from_report = invoke({"plot", model("ellipse"), "--report", report.string()});
  const auto recomputed = invoke({"plot", model("ellipse")});
  ASSERT_EQ(from_report.code, 0) << from_report.err;
  EXPECT_EQ(from_report.out, recomputed.out);

  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_EQ(invoke({"plot", model("ellipse"), "--report", (dir / "bad.json").string()}).code, cli::kExitUsage);
}

TEST(Cli, OutputIndependentOfWorkers) {
  const auto one = invoke({"reach", model("ellipse"), "--workers", "1"});
  const auto four = invoke({"reach", model("ellipse"), "--workers", "4"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  const auto s1 = invoke({"sample-slice", "fig2_curve", "--slices", "2", "--workers", "1"});
  const auto s3 = invoke({"sample-slice", "fig2_curve", "--slices", "2", "--workers", "3"});
  ASSERT_EQ(s1.code, 0) << s1.err;
  EXPECT_EQ(s1.out, s3.out);
}

TEST(Cli, SeedChangesSlicesNotRoots) {
  const auto a = Json::parse(invoke({"solve", "circle_line", "--seed", "1"}).out);
  const auto b = Json::parse(invoke({"solve", "circle_line", "--seed", "2"}).out);
  ASSERT_EQ(a["solutions"].size(), b["solutions"].size());
  EXPECT_EQ(a["seed"], 1);
  for (const auto& s : a["solutions"]) {
    bool found = false;
    for (const auto& t : b["solutions"])
      found |= std::abs(s["point_re"][0].get<double>() - t["point_re"][0].get<double>()) < 1e-12 &&
               std::abs(s["point_re"][1].get<double>() - t["point_re"][1].get<double>()) < 1e-12;
    EXPECT_TRUE(found);
  }
}
