#pragma once

#include <string>
#include <vector>

#include "qzs/field_state.hpp"

namespace qzs {

/// Initial data (E0, N0, N1) of the second-order-in-time problem.
struct InitialData {
  ComplexField E0;
  RealField N0;
  RealField N1;
  /// Non-fatal parameter remarks (e.g. pump wave outside the instability band).
  std::vector<std::string> warnings;
};

/// Travelling soliton of the classical (epsilon = 0) Zakharov system.
struct SolitonParams {
  double B = 1.0;
  double V = 0.5;
  double x0 = 0.0;
};

struct TwoSolitonParams {
  double x1 = -30.0;
  double x2 = 30.0;
  double V1 = 0.5;
  double V2 = -0.5;
};

enum class CollisionCase { I, II, III };

struct PumpParams {
  double k = 0.7;
  double beta = 0.001;
};

struct ExactFields {
  ComplexField E;
  RealField N;
};

/*!
 * E0 = i sqrt(2 B^2 (1 - V^2)) sech(B(x - x0)) exp(i V (x - x0) / 2),
 * N0 = -2 B^2 sech^2(B(x - x0)),
 * N1 = dN/dt at t = 0 of the travelling wave, -4 B^3 V sech^2 tanh.
 */
InitialData init_zs_soliton(const SpectralGrid& grid, const SolitonParams& p);

/// Exact classical-ZS soliton at time t.
ExactFields exact_zs_solution(const SpectralGrid& grid, const SolitonParams& p, double t);

/// E0 = cos^2(pi x / 8) cos^2(pi y / 8), N0 = N1 = 0.
InitialData init_cosine_2d(const SpectralGrid& grid);

/// Superposition of two unit-width solitons.
InitialData init_two_solitons(const SpectralGrid& grid, const TwoSolitonParams& p);
TwoSolitonParams collision_preset(CollisionCase c);
CollisionCase parse_collision_case(const std::string& name);
const char* to_string(CollisionCase c);

/// Pump amplitude (k / sqrt 2)(1 + epsilon^2 k^2).
double pump_amplitude(double k, double epsilon);

/// Modulated Langmuir pump E0 (1 + beta cos kx), N0 = -sqrt2 E0 k beta cos kx, N1 = 0.
InitialData init_pump_wave(const SpectralGrid& grid, const PumpParams& p, double epsilon);

/// Zero-mean solution of Delta_h v0 = N1.
/// Throws CompatibilityError if |mean(N1)| exceeds max(rel_tol ||N1||_inf, abs_floor).
RealField consistent_v0(const SpectralGrid& grid, std::span<const double> N1, double rel_tol = 1e-10,
                        double abs_floor = 1e-14);

/// Assembles a FieldState at t = 0, solving for v0. q is seeded with |E0|^2
/// when track_q is set.
FieldState make_initial_state(GridPtr grid, const InitialData& data, bool track_q = false);

}  // namespace qzs
