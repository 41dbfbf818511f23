#include <gtest/gtest.h>

#include <cstdlib>

#include "qzs/config.hpp"
#include "qzs/errors.hpp"

using namespace qzs;

namespace {

const char* kMinimal = R"(# minimal
scheme = 2
scenario = zs_soliton
tau = 0.05
T = 1
)";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, MinimalConfigUsesScenarioDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.stages, 2);
  EXPECT_EQ(c.scenario.kind, ScenarioKind::zs_soliton);
  EXPECT_EQ(c.tau, 0.05);
  EXPECT_EQ(c.scenario.T, 1.0);
  EXPECT_EQ(c.scenario.grid.nx, 1024);
  EXPECT_EQ(c.fp_tol, 1e-14);
  EXPECT_EQ(c.fp_max_iters, 30);
  EXPECT_EQ(c.policy, NonconvergencePolicy::abort);
  EXPECT_FALSE(c.track_q);
}

TEST(Config, AllKeys) {
  const RunConfig c = parse_config(R"(
scheme = 3
scenario = cosine_2d
tau = 0.01   # trailing comment
T = 2
epsilon = 0.125
x_min = -4
x_max = 4
nx = 32
y_min = -2
y_max = 2
ny = 16
diag_stride = 5
snapshot_stride = 10
fp_tol = 1e-13
fp_max_iters = 12
fp_policy = warn
track_q = true
output_dir = results
threads = 2
levels = 3
h0 = 0.5
eps_list = 0.5, 0.25,0.125
reference_stages = 2
reference_tau = 0.002
)");
  EXPECT_EQ(c.stages, 3);
  EXPECT_EQ(c.scenario.grid.ny, 16);
  EXPECT_EQ(c.scenario.grid.y.lo, -2.0);
  EXPECT_EQ(c.scenario.epsilon, 0.125);
  EXPECT_EQ(c.diagnostics_stride, 5u);
  EXPECT_EQ(c.snapshot_stride, 10u);
  EXPECT_EQ(c.policy, NonconvergencePolicy::warn_and_continue);
  EXPECT_TRUE(c.track_q);
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_EQ(*c.threads, 2u);
  EXPECT_EQ(c.eps_list, (std::vector<double>{0.5, 0.25, 0.125}));
  EXPECT_EQ(c.reference_tau, 0.002);
}

TEST(Config, ScenarioParameters) {
  const RunConfig c = parse_config(std::string(kMinimal) + "soliton_B = 2\nsoliton_V = -0.25\nsoliton_x0 = 3\n");
  EXPECT_EQ(c.scenario.soliton.B, 2.0);
  EXPECT_EQ(c.scenario.soliton.V, -0.25);
  const RunConfig d = parse_config("scheme=2\nscenario=two_solitons\ntau=0.05\nT=1\ncase=III\nV2=-0.4\n");
  EXPECT_EQ(d.scenario.two.x1, -5.0);
  EXPECT_EQ(d.scenario.two.V2, -0.4);
  const RunConfig p = parse_config("scheme=2\nscenario=pump_wave\ntau=0.05\nT=1\npump_k=0.5\npump_beta=0\n");
  EXPECT_EQ(p.scenario.pump.k, 0.5);
  EXPECT_EQ(p.scenario.pump.beta, 0.0);
}

TEST(Config, NegativeTau) {
  const std::string e = error_of("scheme = 2\nscenario = zs_soliton\ntau = -0.1\nT = 1\n");
  EXPECT_NE(e.find("tau must be positive"), std::string::npos);
  EXPECT_NE(e.find("line 3"), std::string::npos);
}

TEST(Config, DuplicateKeyNamesBothLines) {
  const std::string e = error_of(std::string(kMinimal) + "tau = 0.1\n");
  EXPECT_NE(e.find("duplicate key 'tau'"), std::string::npos);
  EXPECT_NE(e.find("line 6"), std::string::npos);
  EXPECT_NE(e.find("line 4"), std::string::npos);
}

TEST(Config, UnknownKeyNamesLine) {
  const std::string e = error_of(std::string(kMinimal) + "colour = blue\n");
  EXPECT_NE(e.find("unknown key 'colour'"), std::string::npos);
  EXPECT_NE(e.find("line 6"), std::string::npos);
}

TEST(Config, MissingMandatoryKey) {
  EXPECT_NE(error_of("scheme = 2\nscenario = zs_soliton\nT = 1\n").find("'tau'"), std::string::npos);
  EXPECT_NE(error_of("scenario = zs_soliton\ntau=1\nT = 1\n").find("'scheme'"), std::string::npos);
}

TEST(Config, TypeMismatch) {
  const std::string e = error_of("scheme = two\nscenario = zs_soliton\ntau = 0.1\nT = 1\n");
  EXPECT_NE(e.find("line 1"), std::string::npos);
  EXPECT_NE(e.find("integer"), std::string::npos);
  EXPECT_FALSE(error_of(std::string(kMinimal) + "track_q = maybe\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "eps_list = 0.1,,0.2\n").empty());
}

TEST(Config, RangeChecks) {
  EXPECT_FALSE(error_of("scheme = 4\nscenario = zs_soliton\ntau = 0.1\nT = 1\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "diag_stride = 0\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "nx = 101\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "x_max = -200\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "ny = 8\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "fp_policy = retry\n").empty());
  EXPECT_FALSE(error_of("scheme = 2\nscenario = nowhere\ntau = 0.1\nT = 1\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "no equals sign\n").empty());
}

TEST(Config, ThreadsConfigWinsOverEnvironment) {
  ::setenv("QZS_THREADS", "5", 1);
  EXPECT_EQ(effective_threads(parse_config(kMinimal)), 5u);
  EXPECT_EQ(effective_threads(parse_config(std::string(kMinimal) + "threads = 2\n")), 2u);
  ::unsetenv("QZS_THREADS");
  EXPECT_EQ(effective_threads(parse_config(kMinimal)), 1u);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError); }
