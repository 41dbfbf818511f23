#include "qzs/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown after all have joined.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int points_for(const Interval& iv, double h) {
  const double n = iv.length() / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * n) {
    std::ostringstream msg;
    msg << "mesh size " << h << " does not divide the domain length " << iv.length();
    throw InvalidArgumentError(msg.str());
  }
  return static_cast<int>(r);
}

std::vector<double> column(const std::vector<ErrorNorms>& errors, bool e) {
  std::vector<double> out;
  out.reserve(errors.size());
  for (const auto& x : errors) out.push_back(e ? x.e : x.n);
  return out;
}

void fill_rates(ConvergenceReport& r) {
  r.rates_e = pairwise_rates(r.params, column(r.errors, true));
  r.rates_n = pairwise_rates(r.params, column(r.errors, false));
}

}  // namespace

unsigned resolve_threads(unsigned hint) {
  if (hint != 0) return hint;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "zs_soliton") return ScenarioKind::zs_soliton;
  if (name == "cosine_2d") return ScenarioKind::cosine_2d;
  if (name == "two_solitons") return ScenarioKind::two_solitons;
  if (name == "pump_wave") return ScenarioKind::pump_wave;
  throw InvalidArgumentError("unknown scenario '" + name +
                             "' (expected zs_soliton, cosine_2d, two_solitons or pump_wave)");
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::zs_soliton:
      return "zs_soliton";
    case ScenarioKind::cosine_2d:
      return "cosine_2d";
    case ScenarioKind::two_solitons:
      return "two_solitons";
    case ScenarioKind::pump_wave:
      return "pump_wave";
  }
  return "?";
}

const char* to_string(ConvergenceAxis axis) {
  switch (axis) {
    case ConvergenceAxis::time:
      return "time";
    case ConvergenceAxis::space:
      return "space";
    case ConvergenceAxis::epsilon:
      return "epsilon";
  }
  return "?";
}

ScenarioSpec default_scenario(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::zs_soliton:
      s.grid = {1, {-128.0, 128.0}, 1024};
      s.epsilon = 0.0;
      s.T = 1.0;
      break;
    case ScenarioKind::cosine_2d:
      s.grid = {2, {-8.0, 8.0}, 256, {-8.0, 8.0}, 256};
      s.epsilon = 0.25;
      s.T = 1.0;
      break;
    case ScenarioKind::two_solitons:
      s.grid = {1, {-200.0, 200.0}, 4000};
      s.epsilon = 0.0;
      s.T = 30.0;
      s.two = collision_preset(CollisionCase::I);
      break;
    case ScenarioKind::pump_wave:
      s.grid = {1, {-100.0, 100.0}, 2000};
      s.epsilon = 0.0;
      s.T = 50.0;
      break;
  }
  return s;
}

ScenarioSpec with_resolution(ScenarioSpec spec, int nx, int ny) {
  spec.grid.nx = nx;
  if (spec.grid.dims == 2) spec.grid.ny = ny > 0 ? ny : nx;
  return spec;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  if (!(spec.epsilon >= 0.0)) throw InvalidArgumentError("epsilon must be >= 0");
  Scenario sc;
  sc.spec = spec;
  sc.grid = make_grid(spec.grid);
  switch (spec.kind) {
    case ScenarioKind::zs_soliton: {
      sc.data = init_zs_soliton(*sc.grid, spec.soliton);
      if (spec.epsilon == 0.0) {
        GridPtr g = sc.grid;
        SolitonParams p = spec.soliton;
        sc.exact = [g, p](double t) { return exact_zs_solution(*g, p, t); };
      }
      break;
    }
    case ScenarioKind::cosine_2d:
      sc.data = init_cosine_2d(*sc.grid);
      break;
    case ScenarioKind::two_solitons:
      sc.data = init_two_solitons(*sc.grid, spec.two);
      break;
    case ScenarioKind::pump_wave:
      sc.data = init_pump_wave(*sc.grid, spec.pump, spec.epsilon);
      break;
  }
  return sc;
}

SolverParams make_params(double tau, double epsilon, const RunOptions& opts) {
  SolverParams p;
  p.tau = tau;
  p.epsilon = epsilon;
  p.fp_tol = opts.fp_tol;
  p.fp_max_iters = opts.fp_max_iters;
  p.nonconvergence_policy = opts.policy;
  p.track_q = opts.track_q;
  return p;
}

FieldState integrate(const Scenario& scenario, int stages, double tau, const RunOptions& opts,
                     std::span<const Observer> observers) {
  FieldState s0 = make_initial_state(scenario.grid, scenario.data, opts.track_q);
  return run(std::move(s0), make_params(tau, scenario.spec.epsilon, opts), gauss_tableau(stages), scenario.spec.T,
             observers);
}

std::vector<double> pairwise_rates(const std::vector<double>& params, const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(params[k] / params[k + 1]));
  }
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& params, const std::vector<double>& errors) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !(params[k] > 0.0)) continue;
    const double x = std::log(params[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

ExactFields reference_solution(const ScenarioSpec& spec, const RunOptions& opts) {
  FieldState ref = integrate(build_scenario(spec), opts.reference_stages, opts.reference_tau, opts);
  return {std::move(ref.E), std::move(ref.N)};
}

ConvergenceReport temporal_convergence(int stages, double tau0, int levels, const ScenarioSpec& spec,
                                       const ExactFields& reference, const std::string& reference_name,
                                       const RunOptions& opts) {
  if (levels < 1) throw InvalidArgumentError("temporal_convergence: need at least one level");
  if (!(tau0 > 0.0)) throw InvalidArgumentError("temporal_convergence: tau0 must be positive");
  const Scenario sc = build_scenario(spec);

  ConvergenceReport r;
  r.axis = ConvergenceAxis::time;
  r.stages = stages;
  r.reference = reference_name;
  for (int k = 0; k < levels; ++k) r.params.push_back(tau0 / std::ldexp(1.0, k));

  r.errors.resize(static_cast<std::size_t>(levels));
  parallel_for(r.params.size(), opts.threads, [&](std::size_t k) {
    const FieldState end = integrate(sc, stages, r.params[k], opts);
    r.errors[k] = error_norms(end, reference.E, reference.N);
  });
  fill_rates(r);
  return r;
}

ConvergenceReport temporal_convergence(int stages, double tau0, int levels, const ScenarioSpec& spec,
                                       const RunOptions& opts) {
  const Scenario sc = build_scenario(spec);
  if (sc.exact) return temporal_convergence(stages, tau0, levels, spec, sc.exact(spec.T), "exact", opts);
  std::ostringstream name;
  name << "s=" << opts.reference_stages << " tau=" << opts.reference_tau;
  return temporal_convergence(stages, tau0, levels, spec, reference_solution(spec, opts), name.str(), opts);
}

ConvergenceReport spatial_convergence(int stages, double h0, int levels, double tau, const ScenarioSpec& spec,
                                      const RunOptions& opts) {
  if (levels < 1) throw InvalidArgumentError("spatial_convergence: need at least one level");
  if (!(h0 > 0.0)) throw InvalidArgumentError("spatial_convergence: h0 must be positive");

  ConvergenceReport r;
  r.axis = ConvergenceAxis::space;
  r.stages = stages;
  std::vector<ScenarioSpec> specs;
  for (int k = 0; k < levels; ++k) {
    const double h = h0 / std::ldexp(1.0, k);
    r.params.push_back(h);
    const int ny = spec.grid.dims == 2 ? points_for(spec.grid.y, h) : 0;
    specs.push_back(with_resolution(spec, points_for(spec.grid.x, h), ny));
  }

  std::optional<FieldState> fine;
  const bool has_exact = spec.kind == ScenarioKind::zs_soliton && spec.epsilon == 0.0;
  if (has_exact) {
    r.reference = "exact";
  } else {
    const ScenarioSpec& last = specs.back();
    const ScenarioSpec fine_spec = with_resolution(spec, 2 * last.grid.nx, 2 * last.grid.ny);
    fine = integrate(build_scenario(fine_spec), stages, tau, opts);
    std::ostringstream msg;
    msg << "grid " << fine_spec.grid.nx;
    if (fine_spec.grid.dims == 2) msg << "x" << fine_spec.grid.ny;
    r.reference = msg.str();
  }

  r.errors.resize(specs.size());
  parallel_for(specs.size(), opts.threads, [&](std::size_t k) {
    const Scenario sc = build_scenario(specs[k]);
    const FieldState end = integrate(sc, stages, tau, opts);
    if (sc.exact) {
      const ExactFields ex = sc.exact(spec.T);
      r.errors[k] = error_norms(end, ex.E, ex.N);
      return;
    }
    // Sample the fine reference at the coarse nodes.
    const auto fx = static_cast<std::size_t>(fine->grid->nx() / sc.grid->nx());
    const auto fy = static_cast<std::size_t>(fine->grid->ny() / sc.grid->ny());
    const auto fnx = static_cast<std::size_t>(fine->grid->nx());
    const auto nx = static_cast<std::size_t>(sc.grid->nx());
    ComplexField E_ref(sc.grid->size());
    RealField N_ref(sc.grid->size());
    for (std::size_t i = 0; i < sc.grid->size(); ++i) {
      const std::size_t src = (i / nx) * fy * fnx + (i % nx) * fx;
      E_ref[i] = fine->E[src];
      N_ref[i] = fine->N[src];
    }
    r.errors[k] = error_norms(end, E_ref, N_ref);
  });
  fill_rates(r);
  return r;
}

ConvergenceReport semiclassical_limit(int stages, const std::vector<double>& eps_list, double tau,
                                      const ScenarioSpec& spec, const RunOptions& opts) {
  if (eps_list.empty()) throw InvalidArgumentError("semiclassical_limit: empty epsilon list");
  ConvergenceReport r;
  r.axis = ConvergenceAxis::epsilon;
  r.stages = stages;
  r.params = eps_list;
  r.reference = "eps=0";

  ScenarioSpec classical = spec;
  classical.epsilon = 0.0;
  const FieldState ref = integrate(build_scenario(classical), stages, tau, opts);

  r.errors.resize(eps_list.size());
  parallel_for(eps_list.size(), opts.threads, [&](std::size_t k) {
    ScenarioSpec s = spec;
    s.epsilon = eps_list[k];
    const FieldState end = integrate(build_scenario(s), stages, tau, opts);
    r.errors[k] = error_norms(end, ref.E, ref.N);
  });
  fill_rates(r);
  r.slope_e = loglog_slope(r.params, column(r.errors, true));
  r.slope_n = loglog_slope(r.params, column(r.errors, false));
  return r;
}

SimulationResult simulate(const Scenario& scenario, const SimulationOptions& opts) {
  if (opts.diagnostics_stride < 1) throw InvalidArgumentError("diagnostics stride must be >= 1");
  DiagnosticsRecorder recorder(scenario.spec.epsilon);
  std::vector<Observer> observers{recorder.observer(opts.diagnostics_stride)};
  if (opts.snapshot_stride > 0 && opts.on_snapshot) {
    auto cb = opts.on_snapshot;
    observers.push_back({opts.snapshot_stride, [cb](const FieldState& s, const StepInfo&) { cb(s); }});
  }
  SimulationResult out;
  out.final_state = integrate(scenario, opts.stages, opts.tau, opts.run, observers);
  out.records = recorder.records();
  out.max_rm = recorder.max_rm();
  out.max_rh = recorder.max_rh();
  out.max_q_defect = recorder.max_q_defect();
  return out;
}

ScenarioSpec collision_spec(CollisionCase c, double epsilon, double T) {
  ScenarioSpec s = default_scenario(ScenarioKind::two_solitons);
  s.two = collision_preset(c);
  s.epsilon = epsilon;
  s.T = T;
  return s;
}

SimulationResult collision_scenario(CollisionCase c, double epsilon, double T, SimulationOptions opts) {
  return simulate(build_scenario(collision_spec(c, epsilon, T)), opts);
}

ScenarioSpec pattern_spec(double epsilon, double T, const PumpParams& pump) {
  ScenarioSpec s = default_scenario(ScenarioKind::pump_wave);
  s.pump = pump;
  s.epsilon = epsilon;
  s.T = T;
  return s;
}

SimulationResult pattern_scenario(double epsilon, double T, SimulationOptions opts, const PumpParams& pump) {
  return simulate(build_scenario(pattern_spec(epsilon, T, pump)), opts);
}

RealField sqrt_modulus(const ComplexField& E) {
  RealField out(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) out[i] = std::sqrt(std::abs(E[i]));
  return out;
}

double reflection_defect(const FieldState& state) {
  state.validate();
  const SpectralGrid& g = *state.grid;
  if (g.dims() != 1) throw DimensionError("reflection_defect: requires a 1D grid");
  if (std::abs(g.spec().x.lo + g.spec().x.hi) > 1e-12 * g.spec().x.length()) {
    throw InvalidArgumentError("reflection_defect: grid is not symmetric about 0");
  }
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = (n - j) % n;
    worst = std::max(worst, std::abs(state.E[j] - state.E[m]));
    worst = std::max(worst, std::abs(state.N[j] - state.N[m]));
  }
  return worst;
}

}  // namespace qzs
