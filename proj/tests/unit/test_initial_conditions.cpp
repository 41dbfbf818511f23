#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qzs/errors.hpp"
#include "qzs/initial_conditions.hpp"

using namespace qzs;

TEST(InitialConditions, SolitonMatchesClosedForm) {
  auto g = make_grid({-32.0, 32.0}, 256);
  const SolitonParams p{1.0, 0.5, 0.0};
  const InitialData d = init_zs_soliton(*g, p);
  for (std::size_t j = 0; j < g->size(); j += 17) {
    const double x = g->x_nodes()[j];
    const double s = 1.0 / std::cosh(x);
    const Complex E = Complex(0.0, std::sqrt(1.5)) * s * std::polar(1.0, x / 4.0);
    EXPECT_NEAR(std::abs(d.E0[j] - E), 0.0, 1e-15);
    EXPECT_NEAR(d.N0[j], -2.0 * s * s, 1e-15);
    EXPECT_NEAR(d.N1[j], -2.0 * s * s * std::tanh(x), 1e-15);
  }
}

TEST(InitialConditions, SolitonN1IsTimeDerivativeOfExactN) {
  auto g = make_grid({-32.0, 32.0}, 256);
  const SolitonParams p{1.3, -0.4, 2.0};
  const InitialData d = init_zs_soliton(*g, p);
  const double h = 1e-5;
  const ExactFields plus = exact_zs_solution(*g, p, h), minus = exact_zs_solution(*g, p, -h);
  for (std::size_t j = 0; j < g->size(); ++j) {
    EXPECT_NEAR(d.N1[j], (plus.N[j] - minus.N[j]) / (2 * h), 1e-8);
  }
}

TEST(InitialConditions, SolitonRequiresOneDimensionAndSubluminalSpeed) {
  auto g2 = make_grid({-8.0, 8.0}, 8, {-8.0, 8.0}, 8);
  EXPECT_THROW(init_zs_soliton(*g2, {}), DimensionError);
  auto g = make_grid({-8.0, 8.0}, 16);
  EXPECT_THROW(init_zs_soliton(*g, {1.0, 1.0, 0.0}), InvalidArgumentError);
}

TEST(InitialConditions, Cosine2D) {
  auto g = make_grid({-8.0, 8.0}, 16, {-8.0, 8.0}, 16);
  const InitialData d = init_cosine_2d(*g);
  EXPECT_NEAR(d.E0[8 * 16 + 8].real(), 1.0, 1e-15);  // origin
  EXPECT_NEAR(d.E0[0].real(), 1.0, 1e-15);           // corner (-8, -8)
  EXPECT_NEAR(std::abs(d.E0[4 * 16 + 4]), 0.0, 1e-15);  // (-4, -4)
  for (double n : d.N0) EXPECT_EQ(n, 0.0);
  EXPECT_THROW(init_cosine_2d(*make_grid({-8.0, 8.0}, 16)), DimensionError);
}

TEST(InitialConditions, TwoSolitonsAreSumOfSingles) {
  auto g = make_grid({-100.0, 100.0}, 1000);
  const TwoSolitonParams p = collision_preset(CollisionCase::II);
  const InitialData d = init_two_solitons(*g, p);
  const InitialData a = init_zs_soliton(*g, {1.0, p.V1, p.x1});
  const InitialData b = init_zs_soliton(*g, {1.0, p.V2, p.x2});
  for (std::size_t j = 0; j < g->size(); ++j) {
    EXPECT_NEAR(std::abs(d.E0[j] - a.E0[j] - b.E0[j]), 0.0, 1e-14);
    EXPECT_NEAR(d.N0[j], a.N0[j] + b.N0[j], 1e-14);
    EXPECT_NEAR(d.N1[j], a.N1[j] + b.N1[j], 1e-14);
  }
}

TEST(InitialConditions, CollisionPresets) {
  const auto c3 = collision_preset(CollisionCase::III);
  EXPECT_EQ(c3.x1, -5.0);
  EXPECT_EQ(c3.x2, 5.0);
  EXPECT_EQ(c3.V1, 0.75);
  EXPECT_EQ(c3.V2, -0.5);
  EXPECT_EQ(parse_collision_case("II"), CollisionCase::II);
  EXPECT_EQ(parse_collision_case("3"), CollisionCase::III);
  EXPECT_THROW(parse_collision_case("IV"), InvalidArgumentError);
}

TEST(InitialConditions, PumpWave) {
  auto g = make_grid({-100.0, 100.0}, 2000);
  const double amp = 0.7 / std::numbers::sqrt2;
  const InitialData d = init_pump_wave(*g, {0.7, 0.001}, 0.0);
  EXPECT_TRUE(d.warnings.empty());
  EXPECT_NEAR(d.E0[1000].real(), amp * 1.001, 1e-15);  // x = 0
  EXPECT_NEAR(d.N0[1000], -std::numbers::sqrt2 * amp * 0.7 * 0.001, 1e-15);
  EXPECT_NEAR(pump_amplitude(0.7, 0.5), amp * (1.0 + 0.25 * 0.49), 1e-15);
}

TEST(InitialConditions, PumpWaveOutsideInstabilityBandWarns) {
  auto g = make_grid({-100.0, 100.0}, 200);
  const InitialData d = init_pump_wave(*g, {-0.5, 0.001}, 0.0);
  EXPECT_FALSE(d.warnings.empty());
}

TEST(InitialConditions, ConsistentV0SolvesPoisson) {
  auto g = make_grid({-16.0, 16.0}, 128);
  const InitialData d = init_zs_soliton(*g, {1.0, 0.5, 0.0});
  const RealField v = consistent_v0(*g, d.N1);
  const RealField lap = apply_laplacian(*g, v);
  double mean = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    EXPECT_NEAR(lap[j], d.N1[j], 1e-12);
    mean += v[j];
  }
  EXPECT_NEAR(mean / static_cast<double>(v.size()), 0.0, 1e-14);
}

TEST(InitialConditions, ConsistentV0RejectsNonzeroMean) {
  auto g = make_grid({0.0, 1.0}, 16);
  RealField N1(16, 0.0);
  N1[3] = 1.0;
  try {
    consistent_v0(*g, N1);
    FAIL();
  } catch (const CompatibilityError& e) {
    EXPECT_NEAR(e.mean(), 1.0 / 16, 1e-15);
  }
}

TEST(InitialConditions, ConsistentV0OfZeroIsZero) {
  auto g = make_grid({0.0, 1.0}, 16, {0.0, 1.0}, 8);
  const RealField v = consistent_v0(*g, RealField(g->size(), 0.0));
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(InitialConditions, InitialStateSeedsQ) {
  auto g = make_grid({-16.0, 16.0}, 64);
  const FieldState s = make_initial_state(g, init_zs_soliton(*g, {}), true);
  ASSERT_TRUE(s.q.has_value());
  for (std::size_t j = 0; j < s.E.size(); ++j) EXPECT_DOUBLE_EQ((*s.q)[j], std::norm(s.E[j]));
  EXPECT_FALSE(make_initial_state(g, init_zs_soliton(*g, {}), false).q.has_value());
}
