#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(AFSEC_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("afsec_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, GenThenValidate) {
  ASSERT_EQ(run("gen --relays 5 --eavesdroppers 3 --seed 7 --out " + path("n.json")).code, 0);
  const auto v = run("validate " + path("n.json"));
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("degraded=true"), std::string::npos);
}

TEST_F(Cli, ZeroForcingJson) {
  ASSERT_EQ(run("gen --relays 5 --eavesdroppers 3 --seed 7 --out " + path("n.json")).code, 0);
  const auto r = run("solve --net " + path("n.json") + " --method zero_forcing --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["method"], "zero_forcing");
  ASSERT_EQ(j["snr_e"].size(), 3u);
  for (const auto& s : j["snr_e"]) EXPECT_LE(s.get<double>(), 1e-10);
  EXPECT_TRUE(j.contains("diagnostics"));
}

TEST_F(Cli, EveryMethodRunsOrFailsCleanly) {
  ASSERT_EQ(run("gen --relays 3 --eavesdroppers 1 --seed 3 --out " + path("n.json")).code, 0);
  for (const char* method : {"zero_forcing", "sum_iterative", "individual_iterative", "oracle_grid",
                             "oracle_multistart"}) {
    const auto r = run("solve --net " + path("n.json") + " --method " + method + " --json --starts 5 --resolution 21");
    EXPECT_EQ(r.code, 0) << method;
    EXPECT_EQ(nlohmann::json::parse(r.out)["method"], method);
  }
  // not symmetric: a solver error
  EXPECT_EQ(run("solve --net " + path("n.json") + " --method symmetric").code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("sweep --methods nonsense --trials 1 --steps 2").code, 1);
  EXPECT_EQ(run("solve --net x.json --method nonsense").code, 1);
  EXPECT_EQ(run("solve --method zero_forcing").code, 1);
}

TEST_F(Cli, SolverErrorsExitTwo) {
  EXPECT_EQ(run("solve --net " + path("missing.json")).code, 2);
  std::ofstream(path("bad.json")) << "{\"m\": 2}";
  EXPECT_EQ(run("validate " + path("bad.json")).code, 2);
}

TEST_F(Cli, SweepIsReproducible) {
  const std::string args = "sweep --var relay_count --from 2 --to 3 --steps 2 --trials 2 --seed 4 --out ";
  ASSERT_EQ(run(args + path("a.csv")).code, 0);
  ASSERT_EQ(run(args + path("b.csv")).code, 0);
  std::stringstream a, b;
  a << std::ifstream(path("a.csv")).rdbuf();
  b << std::ifstream(path("b.csv")).rdbuf();
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("relay_count,2,sum_iterative"), std::string::npos);
}

TEST_F(Cli, SweepSpecFile) {
  std::ofstream(path("spec.json")) << R"({"sweep": "source_power", "from": 1, "to": 2, "steps": 2,
                                          "trials": 1, "methods": ["zero_forcing"]})";
  const auto r = run("sweep --spec " + path("spec.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("source_power,1,zero_forcing"), std::string::npos);
  std::ofstream(path("bad.json")) << R"({"sweep": "source_power", "from": 1, "to": 2, "steps": 2, "methods": ["x"]})";
  EXPECT_EQ(run("sweep --spec " + path("bad.json")).code, 1);
}

TEST_F(Cli, SeedFromEnvironment) {
  ASSERT_EQ(run("gen --relays 2 --eavesdroppers 1 --out " + path("a.json")).code, 0);
  ::setenv("AFSEC_SEED", "12345", 1);
  const auto env = run("gen --relays 2 --eavesdroppers 1");
  ::unsetenv("AFSEC_SEED");
  const auto explicit_seed = run("gen --relays 2 --eavesdroppers 1 --seed 12345");
  EXPECT_EQ(env.out, explicit_seed.out);
  std::stringstream a;
  a << std::ifstream(path("a.json")).rdbuf();
  EXPECT_NE(nlohmann::json::parse(a.str()), nlohmann::json::parse(env.out));
}
