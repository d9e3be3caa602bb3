#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(RBK_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rbk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path scenario(const std::string& id) const { return fs::path(RBK_SCENARIO_DIR) / (id + ".json"); }
  fs::path dir_;
};

TEST_F(Cli, RunFubiniStudyWritesReport) {
  ASSERT_EQ(run("run " + scenario("p1_fs").string() + " --out " + (dir_ / "out").string(), dir_ / "log"), 0);
  const std::string report = slurp(dir_ / "out" / "report.txt");
  EXPECT_NE(report.find("vol_from_dims=1\n"), std::string::npos);
  for (const char* f : {"kernel.csv", "envelope.csv", "ma.csv", "volume_report.csv"}) EXPECT_TRUE(fs::exists(dir_ / "out" / f));
}

TEST_F(Cli, DiagonalBumpAgreesThreeWays) {
  ASSERT_EQ(run("run " + scenario("diag_bump").string() + " --out " + (dir_ / "out").string(), dir_ / "log"), 0);
  EXPECT_NE(slurp(dir_ / "out" / "report.txt").find("three_way_agreement=true"), std::string::npos);
}

TEST_F(Cli, OutputIsByteIdenticalAcrossRuns) {
  for (const char* out : {"a", "b"})
    ASSERT_EQ(run("run " + scenario("diag_bump").string() + " --out " + (dir_ / out).string(), dir_ / "log"), 0);
  for (const char* f : {"kernel.csv", "envelope.csv", "ma.csv", "volume_report.csv", "report.txt"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(Cli, ExitCodes) {
  std::ofstream(dir_ / "bad.json") << "{\"id\": \"x\", \"polytope\": {\"kind\": \"interval\"}, \"m_list\": [0]}";
  EXPECT_EQ(run("run " + (dir_ / "bad.json").string() + " --out " + (dir_ / "o").string(), dir_ / "log"), 3);
  const std::string msg = slurp(dir_ / "log");
  EXPECT_EQ(msg.rfind("error VALIDATION_ERROR: ", 0), 0u) << msg;
  EXPECT_EQ(std::count(msg.begin(), msg.end(), '\n'), 1);

  std::ofstream(dir_ / "broken.json") << "{\"id\": ";
  EXPECT_EQ(run("run " + (dir_ / "broken.json").string() + " --out " + (dir_ / "o").string(), dir_ / "log"), 3);
  EXPECT_EQ(run("run " + (dir_ / "missing.json").string() + " --out " + (dir_ / "o").string(), dir_ / "log"), 2);
  EXPECT_EQ(run("run " + scenario("p1_fs").string() + " --out /proc/rbk_no_such_dir", dir_ / "log"), 2);
  EXPECT_EQ(slurp(dir_ / "log").rfind("error IO_OUT_DIR: ", 0), 0u);
  EXPECT_EQ(run("frobnicate", dir_ / "log"), 3);
}

TEST_F(Cli, SweepWritesOneDirectoryPerScenario) {
  ASSERT_EQ(run("sweep --all --out " + (dir_ / "sw").string(), dir_ / "log"), 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "sw")) n += fs::exists(e.path() / "report.txt");
  EXPECT_EQ(n, 7u);
}

}  // namespace
