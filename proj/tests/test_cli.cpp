#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "roumieu/cli/runner.hpp"

using namespace roumieu::cli;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = ROUMIEU_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roumieu_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

json minimal() {
  return json::parse(R"({"weight": {"family": "gevrey", "s": 2, "N": 64}, "suites": ["weights"]})");
}

std::string error_path(const json& cfg) {
  try {
    Experiment e(cfg);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(Config, ErrorsCarryFieldPath) {
  json c = minimal();
  c.erase("suites");
  EXPECT_EQ(error_path(c), "$.suites");
  c = minimal();
  c["suites"] = json::array();
  EXPECT_EQ(error_path(c), "$.suites");
  c = minimal();
  c["suites"] = {"bogus"};
  EXPECT_EQ(error_path(c), "$.suites");
  c = minimal();
  c["tolerances"] = {{"agree", -1.0}};
  c["suites"] = {"convolution"};
  EXPECT_THROW(Experiment(c).tol("agree", 1e-7), ConfigError);
  c = minimal();
  c["distributions"] = {{"b", {{"density", "missing"}}}};
  EXPECT_EQ(error_path(c), "$.distributions.b.density");
  c = minimal();
  c["functions"] = {{"f", {{"atom", {{"center", {0.0}}, {"radius", {-1.0}}}}}}};
  EXPECT_EQ(error_path(c), "$.functions.f.atom.radius");
  c = minimal();
  c["weight"]["family"] = "nope";
  EXPECT_EQ(error_path(c), "$.weight.family");
}

TEST(Run, GevreyS1FailsNonQuasianalyticity) {
  const auto dir = scratch("s1");
  const auto ex = Experiment::from_file(kConfigs + "/gevrey_s1.json");
  const auto r = run(ex, {dir.string(), {}, false});
  EXPECT_FALSE(r.pass);
  const json& checks = r.report["suites"]["weights"]["checks"];
  bool found = false;
  for (const auto& c : checks)
    if (c["id"] == "weights.M3prime") {
      found = true;
      EXPECT_FALSE(c["pass"].get<bool>());
      EXPECT_EQ(c["detail"]["first_violation"][0].get<int>(), 12367);
      EXPECT_GT(c["detail"]["partial_sum"].get<double>(), 10.0);
    }
  EXPECT_TRUE(found);
  const std::string text = explain(r.report_path);
  EXPECT_NE(text.find("[FAIL] weights.M3prime"), std::string::npos);
  EXPECT_NE(text.find("partial sum"), std::string::npos);
}

TEST(Run, OneOneIsAnExpectedFailure) {
  const auto dir = scratch("one");
  const auto ex = Experiment::from_file(kConfigs + "/one_one.json");
  const auto r = run(ex, {dir.string(), {}, false});
  EXPECT_TRUE(r.pass);
  const json& c = r.report["suites"]["convolution"]["checks"][0];
  EXPECT_EQ(c["outcome"], "holds");
  EXPECT_TRUE(c["detail"]["none_converged"].get<bool>());
  EXPECT_TRUE(c["detail"]["all_unbounded"].get<bool>());
  // CSV dump with the documented header.
  std::ifstream csv(dir / "convolution_one_one_phi.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "n,value_re,value_im,mode,unit_id");
}

TEST(Run, ParallelMatchesSequential) {
  const auto ex = Experiment::from_file(kConfigs + "/baseline.json");
  const std::vector<std::string> light{"weights", "rclass", "komatsu", "integrability"};
  const auto a = run(ex, {scratch("seq").string(), light, false});
  const auto b = run(ex, {scratch("par").string(), light, true});
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(strip_timing(a.report).dump(), strip_timing(b.report).dump());
  EXPECT_THROW(run(ex, {scratch("bad").string(), {"nosuch"}, false}), ConfigError);
}

TEST(Explain, MissingCorruptAndEmpty) {
  const auto dir = scratch("explain");
  fs::create_directories(dir);
  EXPECT_THROW(explain((dir / "none.json").string()), ConfigError);
  std::ofstream(dir / "corrupt.json") << "{not json";
  EXPECT_THROW(explain((dir / "corrupt.json").string()), ConfigError);
  std::ofstream(dir / "empty.json") << R"({"suites": {}})";
  EXPECT_THROW(explain((dir / "empty.json").string()), ConfigError);
}
