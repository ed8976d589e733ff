// End-to-end checks of the command-line tool: exit codes, structured error
// names on stderr, and the values landing in the emitted files.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef FRACTAL_BIN_PATH
#error "FRACTAL_BIN_PATH must be defined"
#endif
#ifndef FRACTAL_CONFIG_DIR
#error "FRACTAL_CONFIG_DIR must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const std::string err_file = std::filesystem::temp_directory_path() / "fractal_cli_stderr.txt";
  const std::string cmd = std::string(FRACTAL_BIN_PATH) + " " + args + " 2>" + err_file;
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.err = slurp(err_file);
  return res;
}

std::string config(const std::string& name) {
  return std::string(FRACTAL_CONFIG_DIR) + "/" + name + ".json";
}

std::string fresh_out_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("fractal_cli_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST(Cli, ValidateAcceptsAndReports) {
  const auto dir = fresh_out_dir("validate_ok");
  const auto res = run_cli("validate --config " + config("valid_space") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/validate.json"));
  EXPECT_TRUE(report.at("valid").get<bool>());
  EXPECT_EQ(report.at("points").get<int>(), 4);
}

TEST(Cli, ValidateNamesTheTriangleViolation) {
  const auto dir = fresh_out_dir("validate_bad");
  const auto res = run_cli("validate --config " + config("triangle_violation") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.err.find("TriangleViolation(0,2,1)"), std::string::npos);
}

TEST(Cli, MalformedInputExitsThree) {
  const auto dir = fresh_out_dir("malformed");
  const auto bad = dir + "/broken.json";
  std::ofstream(bad) << "{this is not json";
  const auto res = run_cli("validate --config " + bad + " --out " + dir);
  EXPECT_EQ(res.exit_code, 3);
  EXPECT_NE(res.err.find("BadConfig"), std::string::npos);
}

TEST(Cli, ClassifyEmitsCanonicalVerdicts) {
  const auto dir = fresh_out_dir("classify");
  ASSERT_EQ(run_cli("classify --config " + config("classify_half") + " --out " + dir).exit_code, 0);
  auto half = nlohmann::json::parse(slurp(dir + "/classify.json"));
  EXPECT_TRUE(half.at("banach").get<bool>());

  ASSERT_EQ(
      run_cli("classify --config " + config("classify_sampled_reciprocal") + " --out " + dir).exit_code,
      0);
  auto sampled = nlohmann::json::parse(slurp(dir + "/classify.json"));
  EXPECT_FALSE(sampled.at("banach").get<bool>());
  EXPECT_TRUE(sampled.at("rakotch").get<bool>());
  EXPECT_TRUE(sampled.at("matkowski").get<bool>());

  ASSERT_EQ(run_cli("classify --config " + config("classify_identity") + " --out " + dir).exit_code, 0);
  auto ident = nlohmann::json::parse(slurp(dir + "/classify.json"));
  EXPECT_FALSE(ident.at("banach").get<bool>());
  EXPECT_FALSE(ident.at("rakotch").get<bool>());
  EXPECT_FALSE(ident.at("matkowski").get<bool>());
}

TEST(Cli, WassersteinValueAndPlan) {
  const auto dir = fresh_out_dir("wasserstein");
  const auto res =
      run_cli("wasserstein --config " + config("wasserstein_uniform_vs_dirac") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/wasserstein.json"));
  EXPECT_EQ(report.at("value").get<std::string>(), "1/2");
  EXPECT_EQ(report.at("plan").at("mass")[1][0].get<std::string>(), "1/2");
}

TEST(Cli, AttractorWritesCloudAndHistory) {
  const auto dir = fresh_out_dir("attractor");
  const auto res = run_cli("attractor --config " + config("sierpinski_attractor") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto history = nlohmann::json::parse(slurp(dir + "/history.json"));
  EXPECT_LE(history.size(), 14u);
  const std::string cloud = slurp(dir + "/attractor.csv");
  EXPECT_NE(cloud.find("0.5,0\n"), std::string::npos);
  EXPECT_NE(cloud.find("0,0.5\n"), std::string::npos);
}

TEST(Cli, NonConvergenceExitsTwoAndKeepsHistory) {
  const auto dir = fresh_out_dir("nonconv");
  const auto cfg = dir + "/swap.json";
  std::ofstream(cfg) << R"({
    "space": {"labels": ["a","b"], "dist": [["0","1"],["1","0"]]},
    "maps": [{"kind":"table","images":{"a":"b","b":"a"}}],
    "initial_set": ["a"],
    "tol": "1/2",
    "max_iter": 5
  })";
  const auto res = run_cli("attractor --config " + cfg + " --out " + dir);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.err.find("NonConvergence(5)"), std::string::npos);
  const auto history = nlohmann::json::parse(slurp(dir + "/history.json"));
  EXPECT_EQ(history.size(), 5u);
}

TEST(Cli, LiftCheckReport) {
  const auto dir = fresh_out_dir("lift");
  const auto res = run_cli("lift-check --config " + config("halving_line") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/lift_report.json"));
  EXPECT_EQ(report.at("strict_fraction").get<double>(), 1.0);
  EXPECT_EQ(report.at("max_ratio").get<std::string>(), "1/2");
  EXPECT_TRUE(report.at("all_marginals_ok").get<bool>());
  EXPECT_EQ(report.at("trials").size(), 100u);
}

TEST(Cli, ExtendTranscript) {
  const auto dir = fresh_out_dir("extend");
  const auto res = run_cli("extend --config " + config("extend_isometry") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/extension.json"));
  EXPECT_EQ(report.at("transcript").size(), 3u);  // 5 domain points, 2 assigned
  EXPECT_EQ(report.at("ambient").at("labels").size(), 5u);
}

TEST(Cli, RealizeVerdict) {
  const auto dir = fresh_out_dir("realize");
  const auto res = run_cli("realize --config " + config("realize_cyclic") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/realize.json"));
  EXPECT_TRUE(report.at("fixed_set_exact").get<bool>());
  EXPECT_EQ(report.at("ambient_points").get<int>(), 12);
  EXPECT_TRUE(report.at("iteration").at("reached_copy").get<bool>());
}

TEST(Cli, UrysohnGrowth) {
  const auto dir = fresh_out_dir("urysohn");
  const auto res = run_cli("urysohn --config " + config("urysohn_growth") + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/urysohn.json"));
  EXPECT_EQ(report.at("points").get<int>(), 22);
  EXPECT_EQ(report.at("rounds_skipped").get<int>(), 0);
}

TEST(Cli, TrialsOverrideChangesReportLength) {
  const auto dir = fresh_out_dir("trials");
  const auto res =
      run_cli("lift-check --config " + config("halving_line") + " --trials 7 --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/lift_report.json"));
  EXPECT_EQ(report.at("trials").size(), 7u);
}

TEST(Cli, SpaceSectionAcceptsCsvPath) {
  const auto dir = fresh_out_dir("csv_space");
  const auto csv = dir + "/space.csv";
  std::ofstream(csv) << "a,b\n0,2/3\n2/3,0\n";
  const auto cfg = dir + "/cfg.json";
  std::ofstream(cfg) << "{\"space\": \"" << csv << "\"}";
  const auto res = run_cli("validate --config " + cfg + " --out " + dir);
  EXPECT_EQ(res.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/validate.json"));
  EXPECT_EQ(report.at("diameter").get<std::string>(), "2/3");
}

TEST(Cli, SeedOverrideChangesChaosOutput) {
  const auto dir1 = fresh_out_dir("chaos1");
  const auto dir2 = fresh_out_dir("chaos2");
  ASSERT_EQ(run_cli("chaos --config " + config("sierpinski_chaos") + " --out " + dir1).exit_code, 0);
  ASSERT_EQ(
      run_cli("chaos --config " + config("sierpinski_chaos") + " --seed 999 --out " + dir2).exit_code, 0);
  EXPECT_NE(slurp(dir1 + "/chaos.csv"), slurp(dir2 + "/chaos.csv"));
}
