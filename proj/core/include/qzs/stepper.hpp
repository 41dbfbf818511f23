#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qzs/field_state.hpp"
#include "qzs/tableau.hpp"

namespace qzs {

enum class NonconvergencePolicy { abort, warn_and_continue };

struct SolverParams {
  double tau = 0.0;
  double epsilon = 0.0;
  double fp_tol = 1e-14;
  int fp_max_iters = 30;
  NonconvergencePolicy nonconvergence_policy = NonconvergencePolicy::abort;
  /// Carry q explicitly through the step instead of substituting |E^n|^2.
  bool track_q = false;
  /// Reject tableaux whose symplectic residual exceeds symplectic_tol.
  bool require_symplectic = true;
  double symplectic_tol = 1e-12;

  void validate() const;
};

/// L = Delta - epsilon^2 Delta^2 per Fourier mode.
RealField linear_multiplier(const SpectralGrid& grid, double epsilon);

/*!
 * Per-mode inverses of the stage blocks
 *   (I - i dt lambda A)      for k1, and
 *   (I - dt^2 lambda A A)    for k2,
 * with lambda = L at each Fourier mode. Built once per (tableau, dt, L).
 *
 * Throws SingularBlockError if a block's 1-norm condition estimate exceeds
 * 1e12.
 */
class ModeBlockSolver {
 public:
  ModeBlockSolver(const RkTableau& tableau, double dt, std::span<const double> L);

  int stages() const { return stages_; }
  std::size_t modes() const { return modes_; }

  /// In place: stages[i][m] holds the rhs for stage i at mode m on entry and
  /// the solution on exit.
  void solve_k1(std::span<ComplexField> stages) const;
  void solve_k2(std::span<ComplexField> stages) const;

 private:
  int stages_;
  std::size_t modes_;
  std::vector<Complex> inv_k1_;  // modes x s x s
  std::vector<double> inv_k2_;   // modes x s x s
};

/// Spectral-space rhs in, physical-space k1 stages out.
std::vector<ComplexField> solve_k1_system(const SpectralGrid& grid, std::vector<ComplexField> rhs_hat,
                                          const RkTableau& tableau, double tau,
                                          std::span<const double> L);
/// Spectral-space rhs in, physical-space (real) k2 stages out.
std::vector<RealField> solve_k2_system(const SpectralGrid& grid, std::vector<ComplexField> rhs_hat,
                                       const RkTableau& tableau, double tau, std::span<const double> L);

/// Converged (or last) stage slopes of one step.
struct StageSlopes {
  std::vector<ComplexField> k1;
  std::vector<RealField> k2;
  int iterations = 0;
  bool converged = false;
  /// Sup-norm change of the final sweep.
  double last_update = 0.0;
};

struct StepStats {
  int iterations = 0;
  bool converged = false;
  double last_update = 0.0;
};

/*!
 * One-step map of the s-stage symplectic Runge-Kutta Fourier pseudo-spectral
 * scheme for the quadratic-auxiliary-variable form of the quantum Zakharov
 * system:
 *
 *   E_t = i (Delta E - eps^2 Delta^2 E - N E),  N_t = Delta v,
 *   v_t = N - eps^2 Delta N + q,                q_t = 2 Re(conj(E) E_t).
 *
 * Stage slopes k1 (for E) and k2 (for N) are found by fixed-point iteration;
 * the linear part of each sweep is solved exactly per Fourier mode, the
 * products N.E and the auxiliary Q are lagged. v and q slopes follow in
 * closed form once k1, k2 are known.
 *
 * Owns its scratch buffers; a Stepper must not be shared between threads.
 */
class Stepper {
 public:
  Stepper(GridPtr grid, RkTableau tableau, SolverParams params);

  const SolverParams& params() const { return params_; }
  const RkTableau& tableau() const { return tableau_; }
  const GridPtr& grid() const { return grid_; }
  const RealField& multiplier() const { return L_; }

  /// Fixed-point solve for the stage slopes at signed step dt. Does not
  /// apply the nonconvergence policy; inspect StageSlopes::converged.
  StageSlopes fixed_point_step(const FieldState& state, double dt);

  /// Advance state by dt from already solved stage slopes.
  void finalize_step(FieldState& state, const StageSlopes& slopes, double dt) const;

  /// Advance by params().tau.
  StepStats step(FieldState& state) { return step(state, params_.tau); }
  /// Advance by a signed dt (negative dt integrates backwards).
  StepStats step(FieldState& state, double dt);

 private:
  const ModeBlockSolver& blocks_for(double dt);
  void check_state(const FieldState& state) const;

  GridPtr grid_;
  RkTableau tableau_;
  SolverParams params_;
  RealField L_;
  std::unique_ptr<ModeBlockSolver> blocks_;
  double blocks_dt_ = 0.0;

  // Scratch reused across steps.
  std::vector<ComplexField> stage_E_, k1_next_, rhs1_, q_hat_;
  std::vector<RealField> stage_N_, stage_Q_, k4_;
  std::vector<ComplexField> rhs2_;
  ComplexField scratch_;
};

struct StepInfo {
  std::size_t step = 0;
  int fp_iterations = 0;
  bool converged = true;
};

/// Read-only callback invoked at step 0 and every `stride` steps after.
struct Observer {
  std::size_t stride = 1;
  std::function<void(const FieldState&, const StepInfo&)> callback;
};

/// Number of steps J with T = J tau; throws if T is not a whole multiple of
/// tau to 1e-12 relative.
std::size_t step_count(double final_time, double tau);

/// Integrates from state0.t to the absolute time T in J = (T - state0.t) / tau
/// steps and returns the state at T.
FieldState run(FieldState state0, const SolverParams& params, const RkTableau& tableau, double T,
               std::span<const Observer> observers = {});

}  // namespace qzs
