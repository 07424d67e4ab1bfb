#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "linepack/cli.hpp"
#include "linepack/ingest.hpp"
#include "linepack/metrics.hpp"
#include "linepack/reference.hpp"
#include "linepack/report.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = linepack::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("linepack_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Optimize, SimplexCoherence) {
  const Outcome o = run({"optimize", "--d", "3", "--n", "4", "--s", "2", "--restarts", "20",
                         "--seed", "7"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("command"), "optimize");
  EXPECT_NEAR(j.at("metrics").at("coherence").get<double>(), 1.0 / 3, 1e-4);
  EXPECT_EQ(j.at("run").at("N"), 4);
  EXPECT_EQ(j.at("vectors").size(), 4u);
}

TEST(Optimize, HalfCircleAtLogKernel) {
  const Outcome o = run({"optimize", "--d", "2", "--n", "5", "--s", "0"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_NEAR(json::parse(o.out).at("metrics").at("coherence").get<double>(),
              std::cos(std::numbers::pi / 5), 1e-6);
}

TEST(Optimize, UsageErrors) {
  EXPECT_EQ(run({"optimize", "--d", "3", "--s", "2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--d", "3", "--n", "4"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--d", "3", "--n", "4", "--s", "2", "--frame-potential"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--d", "1", "--n", "4", "--s", "2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--d", "3", "--n", "4", "--s", "2", "--param", "polar"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--d", "3", "--n", "4", "--s", "two"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  const Outcome missing = run({"optimize", "--d", "3", "--s", "2"});
  EXPECT_NE(missing.err.find("--n"), std::string::npos) << missing.err;
}

TEST(Optimize, HelpExitsZero) {
  const Outcome o = run({"--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("optimize"), std::string::npos);
}

TEST(Optimize, NonConvergenceStillExitsZero) {
  const Outcome o = run({"optimize", "--d", "3", "--n", "9", "--s", "2", "--max-iters", "2",
                         "--restarts", "2"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("run").at("converged"), false);
  EXPECT_EQ(j.at("run").at("stop_reason"), "max_iterations");
}

TEST(Optimize, IdenticalInvocationsGiveIdenticalOutput) {
  const std::vector<std::string> args{"optimize", "--d", "3", "--n", "7", "--s", "1.5",
                                      "--restarts", "4", "--seed", "3"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "3"});
  EXPECT_EQ(run(threaded).out, a.out);
}

TEST(Optimize, CsvFormat) {
  const Outcome o = run({"optimize", "--d", "3", "--n", "4", "--frame-potential", "--restarts",
                         "2", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, linepack::sweep_csv_header());
  EXPECT_EQ(row.rfind("3,4,fp,", 0), 0u) << row;
}

TEST(Optimize, SphericalParametrization) {
  const Outcome o = run({"optimize", "--d", "3", "--n", "4", "--s", "2", "--param", "spherical",
                         "--restarts", "10"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(json::parse(o.out).at("metrics").at("coherence").get<double>(), 1.0 / 3, 1e-4);
}

TEST_F(CliFiles, OptimizeWritesConfiguration) {
  const Outcome o = run({"optimize", "--d", "3", "--n", "6", "--s", "2", "--restarts", "10",
                         "--out", path("x.txt")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("config_path"), path("x.txt"));
  EXPECT_FALSE(j.contains("vectors"));
  const linepack::Frame x = linepack::load_packing(path("x.txt"), 3, 6);
  EXPECT_NEAR(linepack::coherence(x), j.at("metrics").at("coherence").get<double>(), 1e-15);
}

TEST_F(CliFiles, SweepProducesOneRowPerCell) {
  const Outcome o = run({"sweep", "--d", "3", "--n-range", "3:10", "--s-list", "fp,0,2",
                         "--restarts", "2", "--out", path("s.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(slurp(path("s.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, linepack::sweep_csv_header());
  int rows = 0;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    const auto r = linepack::sweep_record_from_csv(line);
    cells.push_back(std::to_string(r.n) + "/" + r.s);
    ++rows;
  }
  EXPECT_EQ(rows, 24);
  EXPECT_EQ(cells.front(), "3/fp");
  EXPECT_EQ(cells[1], "3/0");
  EXPECT_EQ(cells.back(), "10/2");
}

TEST_F(CliFiles, SweepSkipExistingReusesRows) {
  const std::vector<std::string> args{"sweep",      "--d",       "3",  "--n-range",
                                      "3:4",        "--s-list",  "2",  "--restarts",
                                      "2",          "--out",     path("s.csv")};
  ASSERT_EQ(run(args).code, 0);
  std::string text = slurp(path("s.csv"));
  // Tamper with the first data row; skip-existing must carry it over.
  const auto row_start = text.find('\n') + 1;
  const auto energy_start = text.find(',', text.find(',', text.find(',', row_start) + 1) + 1) + 1;
  const auto energy_end = text.find(',', energy_start);
  text.replace(energy_start, energy_end - energy_start, "-1");
  std::ofstream(path("s.csv")) << text;

  auto skip = args;
  skip.push_back("--skip-existing");
  ASSERT_EQ(run(skip).code, 0);
  EXPECT_EQ(slurp(path("s.csv")), text);
}

TEST_F(CliFiles, SweepJson) {
  const Outcome o = run({"sweep", "--d", "3", "--n-range", "4:5", "--s-list", "fp", "--restarts",
                         "2", "--format", "json", "--out", path("s.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(slurp(path("s.json")));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].at("s"), "fp");
  EXPECT_EQ(j[1].at("N"), 5);
}

TEST(Sweep, BadRangeIsUsageError) {
  for (const char* r : {"10:3", "x", "1:3"}) {
    const Outcome o = run({"sweep", "--d", "3", "--n-range", r, "--s-list", "2", "--out",
                           "/nonexistent/dir/file.csv"});
    EXPECT_EQ(o.code, cli::kExitUsage) << r;
    EXPECT_NE(o.err.find("error:"), std::string::npos);
  }
  EXPECT_EQ(run({"sweep", "--d", "3", "--n-range", "3:4", "--s-list", "2,abc", "--out",
                 "/tmp/x.csv"})
                .code,
            cli::kExitUsage);
}

TEST(Pipeline, SevenLinesTight) {
  const Outcome o = run({"pipeline", "--d", "3", "--n", "7", "--s-sep", "3", "--restarts", "10"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_LT(j.at("stage3").at("metrics").at("tightness_residual").get<double>(), 1e-6);
  EXPECT_EQ(j.at("stage2").at("run").at("s"), "3");
  EXPECT_EQ(j.at("stage3").at("run").at("s"), "fp");
  EXPECT_TRUE(j.at("warnings").empty());
  EXPECT_TRUE(o.err.empty());
}

TEST(Pipeline, SmallExponentWarns) {
  const Outcome o =
      run({"pipeline", "--d", "3", "--n", "5", "--s-sep", "0.5", "--restarts", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("warning:"), std::string::npos);
  EXPECT_EQ(json::parse(o.out).at("warnings").size(), 1u);
}

TEST(Gradcheck, DefaultsAndKernels) {
  for (const std::vector<std::string>& extra :
       {std::vector<std::string>{}, {"--s", "0"}, {"--s", "-2"}, {"--frame-potential"}}) {
    std::vector<std::string> args{"gradcheck"};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome o = run(args);
    ASSERT_EQ(o.code, cli::kExitOk) << o.out << o.err;
    const json j = json::parse(o.out);
    EXPECT_LT(j.at("max_rel_error").get<double>(), 1e-5);
    EXPECT_EQ(j.at("pass"), true);
  }
}

TEST(Gradcheck, FailureExitsOne) {
  // A huge finite-difference step makes the check fail.
  const Outcome o = run({"gradcheck", "--step", "0.3", "--format", "text"});
  EXPECT_EQ(o.code, cli::kExitCheckFailed);
  EXPECT_NE(o.out.find("FAIL"), std::string::npos);
}

TEST_F(CliFiles, ReferenceThenMetrics) {
  ASSERT_EQ(run({"reference", "--kind", "icosa6", "--out", path("ico.txt")}).code, 0);
  const Outcome m = run({"metrics", "--in", path("ico.txt"), "--d", "3", "--n", "6"});
  ASSERT_EQ(m.code, 0) << m.err;
  const json j = json::parse(m.out);
  EXPECT_NEAR(j.at("coherence").get<double>(), 1 / std::sqrt(5.0), 1e-12);
  EXPECT_EQ(j.at("equiangular"), true);
}

TEST_F(CliFiles, ReferenceSimplex) {
  ASSERT_EQ(run({"reference", "--kind", "simplex", "--d", "4", "--out", path("s.txt")}).code, 0);
  const Outcome m = run({"metrics", "--in", path("s.txt"), "--d", "4", "--n", "5"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_LT(json::parse(m.out).at("tightness_residual").get<double>(), 1e-10);
  // Wrong N for the stored file.
  EXPECT_EQ(run({"metrics", "--in", path("s.txt"), "--d", "4", "--n", "6"}).code,
            cli::kExitUsage);
}

TEST(Reference, JsonAndErrors) {
  const Outcome o = run({"reference", "--kind", "half-circle", "--n", "3", "--format", "json"});
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("d"), 2);
  EXPECT_EQ(j.at("vectors").size(), 3u);
  EXPECT_EQ(run({"reference", "--kind", "simplex"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"reference", "--kind", "simplex", "--d", "3", "--n", "5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"reference", "--kind", "cube"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"reference", "--kind", "onb", "--d", "3"}).code, 0);
}

TEST_F(CliFiles, CompareWithItself) {
  ASSERT_EQ(run({"reference", "--kind", "icosa6", "--out", path("ico.txt")}).code, 0);
  const Outcome o = run({"compare", "--in-a", path("ico.txt"), "--in-b", path("ico.txt"), "--d",
                         "3", "--n", "6"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j.at("coherence_diff"), 0.0);
  EXPECT_EQ(j.at("residual_diff"), 0.0);
  EXPECT_EQ(j.at("equivalent"), true);
}

TEST(Compare, BadPathIsUsageError) {
  const Outcome o = run({"compare", "--in-a", "/nonexistent/a", "--in-b", "/nonexistent/b", "--d",
                         "3", "--n", "6"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(o.err.find("cannot open"), std::string::npos);
}
