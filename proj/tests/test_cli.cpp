#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "asprt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = asprt::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("asprt_test_" + name);
}

TEST(Cli, Thresholds) {
  const auto r = run({"thresholds", "--alpha", "0.001", "--beta", "0.001"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a 6.906754779\nb -6.906754779\n");
}

TEST(Cli, N1Star) {
  const auto r = run({"n1star", "--normal", "0.1", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("closed 400\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("series 399.508293"), std::string::npos) << r.out;
}

TEST(Cli, Moments) {
  const auto r = run({"moments", "--al", "0.2", "2", "0.7", "0", "1", "0.3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eta_x    0.6332969448"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"n1star"}).code, 2);
  EXPECT_EQ(run({"simulate", "--normal", "0.1"}).code, 2);
  EXPECT_EQ(run({"simulate", "--normal", "0.1", "0", "--poisson", "2", "1"}).code, 2);
  EXPECT_EQ(run({"table"}).code, 2);
  EXPECT_EQ(run({"table", "--preset", "table1", "--format", "xml"}).code, 2);
}

TEST(Cli, RuntimeErrors) {
  auto r = run({"n1star", "--poisson", "-1", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("rate"), std::string::npos);
  r = run({"thresholds", "--alpha", "0", "--beta", "0.1"});
  EXPECT_EQ(r.code, 1);
  r = run({"table", "--preset", "table7"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/preset"), std::string::npos);
  r = run({"simulate", "--config", "/nonexistent/file.json"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SimulateJson) {
  const auto r = run({"simulate", "--normal", "0.5", "0", "--alpha", "1e-3", "-r", "50",
                      "--seed", "4", "--threads", "2", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["replications"], 50);
  EXPECT_EQ(j["master_seed"], 4);
  EXPECT_EQ(j["procedure"], "adaptive");
  EXPECT_DOUBLE_EQ(j["n1_star_closed"].get<double>(), 16.0);
  EXPECT_GT(j["asn"].get<double>(), 2.0);
}

TEST(Cli, ClassicalText) {
  const auto r = run({"classical", "--normal", "0.5", "0", "--alpha", "0.01", "-r", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("procedure        classical"), std::string::npos);
  EXPECT_NE(r.out.find("rounds"), std::string::npos);
}

TEST(Cli, TableFromConfigToFile) {
  const auto cfg = temp_path("cfg.json");
  const auto out = temp_path("out.csv");
  {
    std::ofstream f(cfg);
    f << R"({"distribution": "poisson", "params_f0": [2], "params_f1": [1],
             "alphas": [0.001, 0.0001], "replications": 30, "seed": 2})";
  }
  const auto r = run({"table", "--config", cfg.string(), "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = asprt::read_csv(ss.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "s1|poisson(2)|poisson(1)");
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST(Cli, TableMarkdownStdout) {
  const auto r = run({"table", "--preset", "table1", "-r", "3", "--format", "markdown",
                      "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("N_1^* = 44.444**"), std::string::npos);
}

TEST(Cli, TableSeedReproducible) {
  const std::vector<std::string> base{"table", "--preset", "table2", "--seed", "42",
                                      "-r", "20"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const auto ra = run(a), rb = run(b);
  ASSERT_EQ(ra.code, 0);
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_NE(ra.out.find(",42\n"), std::string::npos);
}

}  // namespace
