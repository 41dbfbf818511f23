#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using qzs::cli::cli_main;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qzs_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << body << "output_dir = " << (dir / "out").string() << "\n";
  return p.string();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

const char* kSmallSoliton = R"(scheme = 2
scenario = zs_soliton
tau = 0.05
T = 1
x_min = -32
x_max = 32
nx = 256
)";

}  // namespace

TEST(Cli, Info) {
  const Result r = invoke({"info"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("schemes: 1 2 3"), std::string::npos);
  EXPECT_NE(r.out.find("QZS1"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"run"}).code, 1);
  EXPECT_EQ(invoke({"run", "/nonexistent.cfg"}).code, 1);
}

TEST(Cli, RunWritesArtifactsAndSummary) {
  const fs::path dir = scratch("run");
  const std::string cfg = write_config(dir, std::string(kSmallSoliton) + "diag_stride = 3\nsnapshot_stride = 10\n");
  const Result r = invoke({"run", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("t=1 "), std::string::npos);
  EXPECT_NE(r.out.find("max_rm="), std::string::npos);
  EXPECT_NE(r.out.find("max_rh="), std::string::npos);
  EXPECT_NE(r.out.find("wall="), std::string::npos);
  // 20 steps, stride 3: floor(20/3) + 1 rows plus the header.
  EXPECT_EQ(count_lines(dir / "out" / "run_diagnostics.csv"), 20u / 3 + 2);
  EXPECT_TRUE(fs::exists(dir / "out" / "run_000002.qzs"));
  EXPECT_TRUE(fs::exists(dir / "out" / "run_final.qzs"));
}

TEST(Cli, NonconvergenceWithAbortExitsTwo) {
  const fs::path dir = scratch("noconv");
  const std::string cfg = write_config(dir, std::string(kSmallSoliton) + "fp_max_iters = 2\n");
  const Result r = invoke({"run", cfg});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("did not converge"), std::string::npos);
}

TEST(Cli, ConfigErrorExitsOne) {
  const fs::path dir = scratch("badcfg");
  const std::string cfg = write_config(dir, "scheme = 2\nscenario = zs_soliton\ntau = -0.1\nT = 1\n");
  const Result r = invoke({"run", cfg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("tau must be positive"), std::string::npos);
}

TEST(Cli, CheckInvariants) {
  const fs::path dir = scratch("inv");
  const Result r = invoke({"check-invariants", write_config(dir, kSmallSoliton)});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_q_defect="), std::string::npos);
}

TEST(Cli, CheckInvariantsFailsOnUnconvergedRun) {
  const fs::path dir = scratch("inv_fail");
  const std::string cfg =
      write_config(dir, std::string(kSmallSoliton) + "fp_max_iters = 2\nfp_policy = warn\n");
  EXPECT_EQ(invoke({"check-invariants", cfg}).code, 2);
}

TEST(Cli, ConvergeTimeWritesReport) {
  const fs::path dir = scratch("ct");
  const std::string cfg = write_config(dir, std::string(kSmallSoliton) + "levels = 3\ntau = 0.1\n");
  // tau appears twice: expect a duplicate-key error.
  EXPECT_EQ(invoke({"converge-time", cfg}).code, 1);
  const std::string good = write_config(dir, "scheme = 2\nscenario = zs_soliton\ntau = 0.25\nT = 1\n"
                                             "x_min = -64\nx_max = 64\nnx = 512\nlevels = 3\n");
  const Result r = invoke({"converge-time", good});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(dir / "out" / "converge_time.csv"), 4u);
  EXPECT_NE(r.out.find("final_rate_e=4.0"), std::string::npos) << r.out;
}

TEST(Cli, ConvergeSpaceAndLimitEps) {
  const fs::path dir = scratch("cs");
  const std::string cfg = write_config(dir, "scheme = 2\nscenario = zs_soliton\ntau = 0.05\nT = 0.5\n"
                                            "x_min = -32\nx_max = 32\nlevels = 2\nh0 = 0.5\n"
                                            "eps_list = 0.125, 0.0625\n");
  EXPECT_EQ(invoke({"converge-space", cfg}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "converge_space.csv"));
  EXPECT_EQ(invoke({"limit-eps", cfg}).code, 0);
  EXPECT_EQ(count_lines(dir / "out" / "limit_eps.csv"), 3u);
}

TEST(Cli, CollideRequiresTwoSolitonScenario) {
  const fs::path dir = scratch("collide_bad");
  EXPECT_EQ(invoke({"collide", "I", write_config(dir, kSmallSoliton)}).code, 1);
  EXPECT_EQ(invoke({"collide", "IV", write_config(dir, kSmallSoliton)}).code, 1);
}

TEST(Cli, CollideAndPattern) {
  const fs::path dir = scratch("collide");
  const std::string cfg = write_config(dir, "scheme = 2\nscenario = two_solitons\ntau = 0.05\nT = 0.5\n"
                                            "nx = 800\nsnapshot_stride = 5\n");
  const Result r = invoke({"collide", "III", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "collide_III_diagnostics.csv"));
  EXPECT_EQ(count_lines(dir / "out" / "collide_III_000001.csv"), 801u);

  const fs::path pdir = scratch("pattern");
  const std::string pcfg = write_config(pdir, "scheme = 2\nscenario = pump_wave\ntau = 0.05\nT = 0.5\n"
                                              "nx = 400\nsnapshot_stride = 10\n");
  ASSERT_EQ(invoke({"pattern", pcfg}).code, 0);
  EXPECT_TRUE(fs::exists(pdir / "out" / "pattern_000000.csv"));
  EXPECT_EQ(invoke({"pattern", cfg}).code, 1);
}
