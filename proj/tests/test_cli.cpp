#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "camhealth/image_io.hpp"
#include "camhealth/rng.hpp"
#include "camhealth/scene.hpp"

namespace fs = std::filesystem;
using namespace camhealth;

#ifndef CAMHEALTH_CLI_PATH
#error "CAMHEALTH_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CAMHEALTH_CLI_PATH + "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("camhealth_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_ / "clean");
    for (int i = 0; i < 2; ++i) {
      save_pgm(spectral_texture(256, 256, 1.4, 110, 20, split_seed(5, i)),
               root_ / "clean" / ("img" + std::to_string(i) + ".pgm"));
    }
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
};

TEST_F(CliTest, NoArgumentsIsConfigError) { EXPECT_EQ(run_cli("").code, 2); }

TEST_F(CliTest, MissingSeedIsConfigError) {
  EXPECT_EQ(run_cli("corrupt --input " + q(root_ / "clean") + " --output " + q(root_ / "o") + " --recipe defocus:3").code,
            2);
}

TEST_F(CliTest, BadRecipeIsConfigError) {
  EXPECT_EQ(run_cli("corrupt --seed 1 --input " + q(root_ / "clean") + " --output " + q(root_ / "o") +
                    " --recipe wobble:3")
                .code,
            2);
}

TEST_F(CliTest, EmptyInputDirectoryIsDataError) {
  fs::create_directories(root_ / "empty");
  EXPECT_EQ(run_cli("corrupt --seed 1 --input " + q(root_ / "empty") + " --output " + q(root_ / "o") +
                    " --recipe defocus:3")
                .code,
            3);
}

TEST_F(CliTest, UnknownReproduceIdIsConfigError) {
  EXPECT_EQ(run_cli("reproduce --seed 1 --id table9 --output " + q(root_ / "r")).code, 2);
}

TEST_F(CliTest, CorruptWritesSidecarsAndIsByteStable) {
  const std::string args = "corrupt --seed 9 --input " + q(root_ / "clean") + " --output " + q(root_ / "c") +
                           " --recipe \"defocus:7 > dcsn:10\"";
  ASSERT_EQ(run_cli(args).code, 0);
  ASSERT_TRUE(fs::exists(root_ / "c" / "img0.pgm"));
  ASSERT_TRUE(fs::exists(root_ / "c" / "img1.gt.json"));
  ASSERT_TRUE(fs::exists(root_ / "c" / "manifest.json"));
  const auto sidecar = nlohmann::json::parse(slurp(root_ / "c" / "img0.gt.json"));
  EXPECT_EQ(sidecar["run"]["seed"], "9");
  EXPECT_EQ(sidecar["seed"], split_seed(9, 0));

  const std::string image = slurp(root_ / "c" / "img0.pgm");
  const std::string manifest = slurp(root_ / "c" / "manifest.json");
  ASSERT_EQ(run_cli(args).code, 0);
  EXPECT_EQ(slurp(root_ / "c" / "img0.pgm"), image);
  EXPECT_EQ(slurp(root_ / "c" / "manifest.json"), manifest);
}

TEST_F(CliTest, EvaluateWithOracleHasZeroAmae) {
  ASSERT_EQ(run_cli("corrupt --seed 3 --input " + q(root_ / "clean") + " --output " + q(root_ / "c") +
                    " --recipe \"lin-motion:7 > readout:5\"")
                .code,
            0);
  ASSERT_EQ(run_cli("evaluate --seed 3 --noise bf --noise pca --input " + q(root_ / "c") + " --output " +
                    q(root_ / "e"))
                .code,
            0);
  const std::string amae = slurp(root_ / "e" / "amae.csv");
  EXPECT_EQ(amae.rfind("# run: ", 0), 0u);
  EXPECT_NE(amae.find("mtf-oracle"), std::string::npos);
  EXPECT_NE(amae.find(",0.00"), std::string::npos);
  const std::string noise = slurp(root_ / "e" / "noise.csv");
  EXPECT_NE(noise.find("bf"), std::string::npos);
  EXPECT_NE(noise.find("pca"), std::string::npos);
}

TEST_F(CliTest, EvaluateWithoutSidecarIsDataError) {
  EXPECT_EQ(run_cli("evaluate --seed 3 --input " + q(root_ / "clean") + " --output " + q(root_ / "e")).code, 3);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(root_ / "cfg.json") << R"({"corrupt": {"seed": 4, "recipe": "defocus:3", "input": ")"
                                    << (root_ / "clean").string() << R"(", "output": ")"
                                    << (root_ / "c").string() << "\"}}";
  const CliRun r = run_cli("--json --config " + q(root_ / "cfg.json") + " corrupt --recipe defocus:11");
  ASSERT_EQ(r.code, 0);
  const auto line = nlohmann::json::parse(r.out);
  EXPECT_EQ(line["status"], "ok");
  EXPECT_EQ(line["command"], "corrupt");
  const auto manifest = nlohmann::json::parse(slurp(root_ / "c" / "manifest.json"));
  EXPECT_EQ(manifest["recipe"], "defocus:11");
  EXPECT_EQ(manifest["run"]["seed"], "4");
}

TEST_F(CliTest, BuildIopcThenControl) {
  const fs::path iopc = root_ / "iopc.json";
  ASSERT_EQ(run_cli("build-iopc --seed 2 --scenes 2 --size 384 --output " + q(iopc)).code, 0);
  ASSERT_TRUE(fs::exists(root_ / "iopc.csv"));
  const CliRun r = run_cli("--json control --seed 2 --iopc " + q(iopc) +
                        " --sigma 3 --mtf 0.9 --exposure 0.028 --iso 1 --target-extent 9 --output " +
                        q(root_ / "action.json"));
  ASSERT_EQ(r.code, 0);
  const auto action = nlohmann::json::parse(slurp(root_ / "action.json"));
  EXPECT_EQ(action["run"]["seed"], "2");
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "ok");
}

TEST_F(CliTest, JsonErrorLine) {
  const CliRun r = run_cli("--json estimate --seed 1 --input " + q(root_ / "missing"));
  EXPECT_EQ(r.code, 3);
  const auto line = nlohmann::json::parse(r.out);
  EXPECT_EQ(line["status"], "error");
  EXPECT_EQ(line["exit_code"], 3);
}

}  // namespace
