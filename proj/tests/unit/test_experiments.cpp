#include <gtest/gtest.h>

#include <cmath>

#include "qzs/errors.hpp"
#include "qzs/experiments.hpp"

using namespace qzs;

namespace {

ScenarioSpec small_soliton() {
  ScenarioSpec s = default_scenario(ScenarioKind::zs_soliton);
  s.grid = {1, {-32.0, 32.0}, 256};
  s.T = 0.5;
  return s;
}

}  // namespace

TEST(Rates, PairwiseAndLeastSquares) {
  const std::vector<double> p{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double x : p) e.push_back(3.0 * std::pow(x, 4));
  for (double r : pairwise_rates(p, e)) EXPECT_NEAR(r, 4.0, 1e-12);
  EXPECT_NEAR(*loglog_slope(p, e), 4.0, 1e-12);
}

TEST(Rates, SlopeSkipsZeroErrors) {
  const std::vector<double> p{0.0, 0.1, 0.01};
  const std::vector<double> e{0.0, 1e-2, 1e-4};
  EXPECT_NEAR(*loglog_slope(p, e), 2.0, 1e-12);
  EXPECT_FALSE(loglog_slope({0.1}, {1e-3}).has_value());
}

TEST(Scenarios, NamesRoundTrip) {
  for (auto k : {ScenarioKind::zs_soliton, ScenarioKind::cosine_2d, ScenarioKind::two_solitons,
                 ScenarioKind::pump_wave}) {
    EXPECT_EQ(parse_scenario_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_scenario_kind("blob"), InvalidArgumentError);
}

TEST(Scenarios, StandardDefaults) {
  const ScenarioSpec c = default_scenario(ScenarioKind::two_solitons);
  EXPECT_EQ(c.grid.nx, 4000);
  EXPECT_EQ(c.grid.x.lo, -200.0);
  const ScenarioSpec p = default_scenario(ScenarioKind::pump_wave);
  EXPECT_EQ(p.grid.nx, 2000);
  EXPECT_EQ(p.pump.k, 0.7);
  EXPECT_EQ(p.pump.beta, 0.001);
  const ScenarioSpec q = default_scenario(ScenarioKind::cosine_2d);
  EXPECT_EQ(q.grid.dims, 2);
  EXPECT_EQ(with_resolution(q, 64).grid.ny, 64);
}

TEST(Scenarios, ExactSolutionOnlyForClassicalSoliton) {
  EXPECT_TRUE(static_cast<bool>(build_scenario(small_soliton()).exact));
  ScenarioSpec s = small_soliton();
  s.epsilon = 0.1;
  EXPECT_FALSE(static_cast<bool>(build_scenario(s).exact));
}

TEST(Convergence, OneLevelHasNoRates) {
  const ConvergenceReport r = temporal_convergence(2, 0.1, 1, small_soliton());
  EXPECT_EQ(r.errors.size(), 1u);
  EXPECT_TRUE(r.rates_e.empty());
  EXPECT_EQ(r.reference, "exact");
}

TEST(Convergence, DeterministicAcrossThreadCounts) {
  RunOptions serial, parallel;
  parallel.threads = 3;
  const ConvergenceReport a = temporal_convergence(2, 0.1, 3, small_soliton(), serial);
  const ConvergenceReport b = temporal_convergence(2, 0.1, 3, small_soliton(), parallel);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.errors[k].e, b.errors[k].e);
    EXPECT_EQ(a.errors[k].n, b.errors[k].n);
  }
}

TEST(Convergence, SelfReferenceWhenNoExactSolution) {
  // Band-limited data; the quantum soliton is pre-asymptotic at these steps.
  ScenarioSpec s = with_resolution(default_scenario(ScenarioKind::cosine_2d), 32);
  s.T = 0.5;
  RunOptions o;
  o.reference_tau = 0.005;
  const ConvergenceReport r = temporal_convergence(2, 0.1, 3, s, o);
  EXPECT_EQ(r.reference, "s=3 tau=0.005");
  for (double rate : r.rates_e) EXPECT_NEAR(rate, 4.0, 0.3);
}

TEST(Convergence, SpatialFallsBackToFinerGrid) {
  ScenarioSpec s = small_soliton();
  s.epsilon = 0.1;
  s.T = 0.1;
  const ConvergenceReport r = spatial_convergence(2, 1.0, 3, 0.05, s);
  EXPECT_EQ(r.reference, "grid 512");
  EXPECT_GT(r.errors[0].e, r.errors[1].e);
  EXPECT_GT(r.errors[1].e, r.errors[2].e);
}

TEST(Convergence, SpatialRejectsNonDividingMesh) {
  EXPECT_THROW(spatial_convergence(2, 0.3, 2, 0.05, small_soliton()), InvalidArgumentError);
}

TEST(Convergence, ZeroEpsilonEntryIsExactlyZero) {
  const ConvergenceReport r = semiclassical_limit(2, {0.0, 0.125}, 0.05, small_soliton());
  EXPECT_EQ(r.errors[0].e, 0.0);
  EXPECT_EQ(r.errors[0].n, 0.0);
  EXPECT_GT(r.errors[1].e, 0.0);
}

TEST(Convergence, QuarteringEpsilonDividesErrorBySixteen) {
  const ConvergenceReport r = semiclassical_limit(2, {1.0 / 32, 1.0 / 128}, 0.05, small_soliton());
  EXPECT_NEAR(r.errors[0].e / r.errors[1].e, 16.0, 0.5);
}

TEST(Simulation, InitialRecordMatchesInitialData) {
  ScenarioSpec s = collision_spec(CollisionCase::III, 0.0, 0.5);
  s.grid.nx = 800;
  const Scenario sc = build_scenario(s);
  std::vector<FieldState> snaps;
  SimulationOptions o;
  o.snapshot_stride = 5;
  o.on_snapshot = [&](const FieldState& st) { snaps.push_back(st); };
  const SimulationResult r = simulate(sc, o);
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_EQ(snaps[0].E, sc.data.E0);
  EXPECT_EQ(snaps[0].N, sc.data.N0);
  EXPECT_EQ(r.records.size(), 11u);
  EXPECT_LT(r.max_rm, 1e-12);
}

TEST(Simulation, ReflectionDefectOfSymmetricData) {
  const Scenario sc = build_scenario(collision_spec(CollisionCase::I, 0.0, 1.0));
  FieldState s = make_initial_state(sc.grid, sc.data);
  // Node coordinates are mirrored only up to rounding of lo + j h.
  EXPECT_LT(reflection_defect(s), 1e-12);
  const Scenario asym = build_scenario(collision_spec(CollisionCase::II, 0.0, 1.0));
  EXPECT_GT(reflection_defect(make_initial_state(asym.grid, asym.data)), 1e-3);
}

TEST(Simulation, SqrtModulus) {
  const RealField r = sqrt_modulus({Complex(3.0, 4.0), Complex(0.0, -16.0)});
  EXPECT_DOUBLE_EQ(r[0], std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(r[1], 4.0);
}

TEST(Simulation, ThreadHint) {
  EXPECT_EQ(resolve_threads(3), 3u);
  EXPECT_GE(resolve_threads(0), 1u);
}
