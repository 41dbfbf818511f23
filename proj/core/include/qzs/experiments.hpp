#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qzs/diagnostics.hpp"
#include "qzs/initial_conditions.hpp"
#include "qzs/stepper.hpp"

namespace qzs {

enum class ScenarioKind { zs_soliton, cosine_2d, two_solitons, pump_wave };

ScenarioKind parse_scenario_kind(const std::string& name);
const char* to_string(ScenarioKind kind);

/// Everything needed to build initial data on a grid.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::zs_soliton;
  GridSpec grid{};
  double epsilon = 0.0;
  double T = 1.0;
  SolitonParams soliton{};
  TwoSolitonParams two{};
  PumpParams pump{};
};

/*!
 * Standard settings per scenario:
 *   zs_soliton    [-128,128), 1024 nodes, eps = 0, T = 1
 *   cosine_2d     [-8,8)^2, 256^2 nodes, eps = 1/4, T = 1
 *   two_solitons  [-200,200), 4000 nodes, eps = 0, T = 30 (case I)
 *   pump_wave     [-100,100), 2000 nodes, eps = 0, T = 50
 * The last two use shortened end times; pass the full ones explicitly.
 */
ScenarioSpec default_scenario(ScenarioKind kind);

/// Same scenario on a grid refined or coarsened to nx (and ny in 2D) points.
ScenarioSpec with_resolution(ScenarioSpec spec, int nx, int ny = 0);

struct Scenario {
  ScenarioSpec spec;
  GridPtr grid;
  InitialData data;
  /// Exact solution at time t, when one is known (classical soliton only).
  std::function<ExactFields(double)> exact;
};

Scenario build_scenario(const ScenarioSpec& spec);

struct RunOptions {
  double fp_tol = 1e-14;
  int fp_max_iters = 30;
  NonconvergencePolicy policy = NonconvergencePolicy::abort;
  bool track_q = false;
  /// Upper bound on concurrently running levels; 0 means hardware concurrency.
  unsigned threads = 1;
  /// Reference run used when no exact solution is available.
  int reference_stages = 3;
  double reference_tau = 1e-3;
};

SolverParams make_params(double tau, double epsilon, const RunOptions& opts);

/// Initial state plus a single run to spec.T; returns the final state.
FieldState integrate(const Scenario& scenario, int stages, double tau, const RunOptions& opts,
                     std::span<const Observer> observers = {});

enum class ConvergenceAxis { time, space, epsilon };
const char* to_string(ConvergenceAxis axis);

struct ConvergenceReport {
  ConvergenceAxis axis = ConvergenceAxis::time;
  int stages = 0;
  /// tau, h or epsilon per level.
  std::vector<double> params;
  std::vector<ErrorNorms> errors;
  /// log(err_k / err_{k+1}) / log(p_k / p_{k+1}); one fewer entry than levels.
  std::vector<double> rates_e;
  std::vector<double> rates_n;
  /// Least-squares slope of log err against log p (epsilon axis only).
  std::optional<double> slope_e;
  std::optional<double> slope_n;
  /// How the reference was produced.
  std::string reference;
};

/// Errors at tau0 / 2^k, k = 0..levels-1, against the exact solution if the
/// scenario has one, else a fine-step reference on the same grid.
ConvergenceReport temporal_convergence(int stages, double tau0, int levels, const ScenarioSpec& spec,
                                       const RunOptions& opts = {});
/// Same, against a caller-supplied reference at spec.T.
ConvergenceReport temporal_convergence(int stages, double tau0, int levels, const ScenarioSpec& spec,
                                       const ExactFields& reference, const std::string& reference_name,
                                       const RunOptions& opts = {});
/// Fine-step reference at spec.T with opts.reference_stages and opts.reference_tau.
ExactFields reference_solution(const ScenarioSpec& spec, const RunOptions& opts = {});

/// Errors at h0 / 2^k with a fixed small tau. Falls back to a grid twice as
/// fine as the finest level, sampled at coarse nodes, when no exact solution
/// exists.
ConvergenceReport spatial_convergence(int stages, double h0, int levels, double tau, const ScenarioSpec& spec,
                                      const RunOptions& opts = {});

/// Distance between runs at each epsilon and the eps = 0 run with identical
/// discretization.
ConvergenceReport semiclassical_limit(int stages, const std::vector<double>& eps_list, double tau,
                                      const ScenarioSpec& spec, const RunOptions& opts = {});

/// Observed rates between adjacent levels.
std::vector<double> pairwise_rates(const std::vector<double>& params, const std::vector<double>& errors);
/// Least-squares slope of log(errors) against log(params); zero errors are skipped.
std::optional<double> loglog_slope(const std::vector<double>& params, const std::vector<double>& errors);

struct SimulationOptions {
  int stages = 2;
  double tau = 0.05;
  std::size_t diagnostics_stride = 1;
  /// 0 disables snapshots.
  std::size_t snapshot_stride = 0;
  std::function<void(const FieldState&)> on_snapshot;
  RunOptions run{};
};

struct SimulationResult {
  FieldState final_state;
  std::vector<DiagnosticsRecord> records;
  double max_rm = 0.0;
  double max_rh = 0.0;
  std::optional<double> max_q_defect;
};

SimulationResult simulate(const Scenario& scenario, const SimulationOptions& opts);

/// Two-soliton collision on the standard grid, with the case's centres and speeds.
ScenarioSpec collision_spec(CollisionCase c, double epsilon, double T);
SimulationResult collision_scenario(CollisionCase c, double epsilon, double T, SimulationOptions opts);

/// Modulated pump on the standard grid.
ScenarioSpec pattern_spec(double epsilon, double T, const PumpParams& pump = {});
SimulationResult pattern_scenario(double epsilon, double T, SimulationOptions opts, const PumpParams& pump = {});

/// |E|^{1/2} pointwise, the field used for contour plots of the pattern runs.
RealField sqrt_modulus(const ComplexField& E);

/// Largest deviation of E and N from their mirror images f(-x), with -x taken
/// modulo the periodic grid. Requires a 1D grid symmetric about 0.
double reflection_defect(const FieldState& state);

/// Number of workers for a thread hint; 0 means hardware concurrency.
unsigned resolve_threads(unsigned hint);

}  // namespace qzs
