#include "qzs/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kMaxBlockCondition = 1e12;

template <typename T>
double one_norm(const std::vector<T>& m, int s) {
  double worst = 0.0;
  for (int j = 0; j < s; ++j) {
    double col = 0.0;
    for (int i = 0; i < s; ++i) col += std::abs(m[static_cast<std::size_t>(i * s + j)]);
    worst = std::max(worst, col);
  }
  return worst;
}

// Gauss-Jordan inverse with partial pivoting; s is at most a handful.
// Returns false if a pivot vanishes.
template <typename T>
bool invert_small(std::vector<T> m, std::vector<T>& inv, int s) {
  const auto idx = [s](int i, int j) { return static_cast<std::size_t>(i * s + j); };
  inv.assign(static_cast<std::size_t>(s * s), T{});
  for (int i = 0; i < s; ++i) inv[idx(i, i)] = T{1};
  for (int col = 0; col < s; ++col) {
    int pivot = col;
    for (int r = col + 1; r < s; ++r) {
      if (std::abs(m[idx(r, col)]) > std::abs(m[idx(pivot, col)])) pivot = r;
    }
    if (std::abs(m[idx(pivot, col)]) == 0.0) return false;
    if (pivot != col) {
      for (int j = 0; j < s; ++j) {
        std::swap(m[idx(col, j)], m[idx(pivot, j)]);
        std::swap(inv[idx(col, j)], inv[idx(pivot, j)]);
      }
    }
    const T d = m[idx(col, col)];
    for (int j = 0; j < s; ++j) {
      m[idx(col, j)] /= d;
      inv[idx(col, j)] /= d;
    }
    for (int r = 0; r < s; ++r) {
      if (r == col) continue;
      const T f = m[idx(r, col)];
      if (f == T{}) continue;
      for (int j = 0; j < s; ++j) {
        m[idx(r, j)] -= f * m[idx(col, j)];
        inv[idx(r, j)] -= f * inv[idx(col, j)];
      }
    }
  }
  return true;
}

template <typename T>
void check_block(const std::vector<T>& block, const std::vector<T>& inv, bool ok, int s, std::size_t mode,
                 const char* which) {
  const double cond = ok ? one_norm(block, s) * one_norm(inv, s) : INFINITY;
  if (!(cond <= kMaxBlockCondition)) {
    std::ostringstream msg;
    msg << which << " stage block is numerically singular at Fourier mode " << mode
        << " (condition estimate " << cond << ")";
    throw SingularBlockError(msg.str(), mode);
  }
}

double sup_diff(const ComplexField& a, const ComplexField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

void SolverParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgumentError("tau must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgumentError("epsilon must be >= 0");
  if (!(fp_tol > 0.0)) throw InvalidArgumentError("fp_tol must be positive");
  if (fp_max_iters < 1) throw InvalidArgumentError("fp_max_iters must be >= 1");
}

RealField linear_multiplier(const SpectralGrid& grid, double epsilon) {
  const RealField& lap = grid.laplacian_multiplier();
  RealField L(lap.size());
  const double e2 = epsilon * epsilon;
  for (std::size_t m = 0; m < lap.size(); ++m) L[m] = lap[m] - e2 * lap[m] * lap[m];
  return L;
}

ModeBlockSolver::ModeBlockSolver(const RkTableau& tableau, double dt, std::span<const double> L)
    : stages_(tableau.stages), modes_(L.size()) {
  const int s = stages_;
  const auto ss = static_cast<std::size_t>(s * s);

  std::vector<double> a2(ss, 0.0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      for (int l = 0; l < s; ++l) a2[static_cast<std::size_t>(i * s + j)] += tableau.A(i, l) * tableau.A(l, j);
    }
  }

  inv_k1_.resize(modes_ * ss);
  inv_k2_.resize(modes_ * ss);
  std::vector<Complex> block1(ss), inv1;
  std::vector<double> block2(ss), inv2;
  for (std::size_t m = 0; m < modes_; ++m) {
    const double lambda = L[m];
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        const auto e = static_cast<std::size_t>(i * s + j);
        const double delta = i == j ? 1.0 : 0.0;
        block1[e] = delta - kI * (dt * lambda * tableau.A(i, j));
        block2[e] = delta - dt * dt * lambda * a2[e];
      }
    }
    const bool ok1 = invert_small(block1, inv1, s);
    check_block(block1, inv1, ok1, s, m, "k1");
    const bool ok2 = invert_small(block2, inv2, s);
    check_block(block2, inv2, ok2, s, m, "k2");
    std::copy(inv1.begin(), inv1.end(), inv_k1_.begin() + static_cast<std::ptrdiff_t>(m * ss));
    std::copy(inv2.begin(), inv2.end(), inv_k2_.begin() + static_cast<std::ptrdiff_t>(m * ss));
  }
}

namespace {

template <typename T>
void apply_blocks(std::span<ComplexField> stages, const std::vector<T>& inverses, int s, std::size_t modes) {
  if (static_cast<int>(stages.size()) != s) {
    throw ShapeError("stage solve: expected " + std::to_string(s) + " stages, got " +
                     std::to_string(stages.size()));
  }
  for (const auto& st : stages) {
    if (st.size() != modes) throw ShapeError("stage solve: rhs length does not match mode count");
  }
  const auto ss = static_cast<std::size_t>(s * s);
  Complex rhs[16];
  std::vector<Complex> rhs_heap;
  Complex* r = rhs;
  if (s > 16) {
    rhs_heap.resize(static_cast<std::size_t>(s));
    r = rhs_heap.data();
  }
  for (std::size_t m = 0; m < modes; ++m) {
    for (int i = 0; i < s; ++i) r[i] = stages[static_cast<std::size_t>(i)][m];
    const T* inv = inverses.data() + m * ss;
    for (int i = 0; i < s; ++i) {
      Complex acc{};
      for (int j = 0; j < s; ++j) acc += inv[i * s + j] * r[j];
      stages[static_cast<std::size_t>(i)][m] = acc;
    }
  }
}

}  // namespace

void ModeBlockSolver::solve_k1(std::span<ComplexField> stages) const {
  apply_blocks(stages, inv_k1_, stages_, modes_);
}

void ModeBlockSolver::solve_k2(std::span<ComplexField> stages) const {
  apply_blocks(stages, inv_k2_, stages_, modes_);
}

std::vector<ComplexField> solve_k1_system(const SpectralGrid& grid, std::vector<ComplexField> rhs_hat,
                                          const RkTableau& tableau, double tau, std::span<const double> L) {
  grid.check_shape(L.size());
  ModeBlockSolver blocks(tableau, tau, L);
  blocks.solve_k1(rhs_hat);
  for (auto& st : rhs_hat) grid.inverse(st, st);
  return rhs_hat;
}

std::vector<RealField> solve_k2_system(const SpectralGrid& grid, std::vector<ComplexField> rhs_hat,
                                       const RkTableau& tableau, double tau, std::span<const double> L) {
  grid.check_shape(L.size());
  ModeBlockSolver blocks(tableau, tau, L);
  blocks.solve_k2(rhs_hat);
  std::vector<RealField> out;
  out.reserve(rhs_hat.size());
  for (const auto& st : rhs_hat) out.push_back(grid.inverse_real(st));
  return out;
}

Stepper::Stepper(GridPtr grid, RkTableau tableau, SolverParams params)
    : grid_(std::move(grid)), tableau_(std::move(tableau)), params_(params) {
  if (!grid_) throw InvalidArgumentError("Stepper: grid is null");
  params_.validate();
  if (tableau_.stages < 1) throw InvalidArgumentError("Stepper: tableau has no stages");
  if (params_.require_symplectic) {
    const double residual = check_symplectic(tableau_);
    if (residual > params_.symplectic_tol) {
      std::ostringstream msg;
      msg << "Stepper: tableau fails the symplectic condition (residual " << residual
          << "); mass and energy conservation would not hold";
      throw InvalidArgumentError(msg.str());
    }
  }
  L_ = linear_multiplier(*grid_, params_.epsilon);

  const auto s = static_cast<std::size_t>(tableau_.stages);
  const std::size_t n = grid_->size();
  stage_E_.assign(s, ComplexField(n));
  k1_next_.assign(s, ComplexField(n));
  rhs1_.assign(s, ComplexField(n));
  rhs2_.assign(s, ComplexField(n));
  q_hat_.assign(s, ComplexField(n));
  stage_N_.assign(s, RealField(n));
  stage_Q_.assign(s, RealField(n));
  k4_.assign(s, RealField(n));
  scratch_.assign(n, Complex{});
}

const ModeBlockSolver& Stepper::blocks_for(double dt) {
  if (!blocks_ || blocks_dt_ != dt) {
    blocks_ = std::make_unique<ModeBlockSolver>(tableau_, dt, L_);
    blocks_dt_ = dt;
  }
  return *blocks_;
}

void Stepper::check_state(const FieldState& state) const {
  state.validate();
  if (state.grid->size() != grid_->size()) throw ShapeError("Stepper: state grid does not match stepper grid");
  if (params_.track_q && !state.q) {
    throw InvalidArgumentError("Stepper: track_q is set but the state carries no q field");
  }
}

StageSlopes Stepper::fixed_point_step(const FieldState& state, double dt) {
  check_state(state);
  const SpectralGrid& grid = *grid_;
  const ModeBlockSolver& blocks = blocks_for(dt);
  const int s = tableau_.stages;
  const auto su = static_cast<std::size_t>(s);
  const std::size_t n = grid.size();
  const RealField& lap = grid.laplacian_multiplier();

  RealField q_base(n);
  if (params_.track_q) {
    q_base = *state.q;
  } else {
    for (std::size_t p = 0; p < n; ++p) q_base[p] = std::norm(state.E[p]);
  }

  // Iteration-invariant parts of both right-hand sides.
  const ComplexField E_hat = grid.forward(std::span<const Complex>(state.E));
  const ComplexField N_hat = grid.forward(std::span<const double>(state.N));
  const ComplexField v_hat = grid.forward(std::span<const double>(state.v));
  ComplexField base1(n);
  for (std::size_t m = 0; m < n; ++m) base1[m] = kI * L_[m] * E_hat[m];
  std::vector<ComplexField> base2(su, ComplexField(n));
  for (std::size_t i = 0; i < su; ++i) {
    const double ci = tableau_.c[i];
    for (std::size_t m = 0; m < n; ++m) base2[i][m] = dt * ci * L_[m] * N_hat[m] + lap[m] * v_hat[m];
  }

  StageSlopes out;
  out.k1.assign(su, state.E);
  out.k2.assign(su, state.N);

  for (int iter = 1; iter <= params_.fp_max_iters; ++iter) {
    for (std::size_t i = 0; i < su; ++i) {
      ComplexField& Ei = stage_E_[i];
      RealField& Ni = stage_N_[i];
      std::copy(state.E.begin(), state.E.end(), Ei.begin());
      std::copy(state.N.begin(), state.N.end(), Ni.begin());
      for (std::size_t j = 0; j < su; ++j) {
        const double w = dt * tableau_.A(static_cast<int>(i), static_cast<int>(j));
        if (w == 0.0) continue;
        const ComplexField& k1j = out.k1[j];
        const RealField& k2j = out.k2[j];
        for (std::size_t p = 0; p < n; ++p) {
          Ei[p] += w * k1j[p];
          Ni[p] += w * k2j[p];
        }
      }
    }
    // Lagged k4 and Q.
    for (std::size_t j = 0; j < su; ++j) {
      for (std::size_t p = 0; p < n; ++p) {
        k4_[j][p] = 2.0 * (std::conj(stage_E_[j][p]) * out.k1[j][p]).real();
      }
    }
    for (std::size_t i = 0; i < su; ++i) {
      RealField& Qi = stage_Q_[i];
      std::copy(q_base.begin(), q_base.end(), Qi.begin());
      for (std::size_t j = 0; j < su; ++j) {
        const double w = dt * tableau_.A(static_cast<int>(i), static_cast<int>(j));
        for (std::size_t p = 0; p < n; ++p) Qi[p] += w * k4_[j][p];
      }
    }

    for (std::size_t i = 0; i < su; ++i) {
      for (std::size_t p = 0; p < n; ++p) scratch_[p] = kI * stage_N_[i][p] * stage_E_[i][p];
      grid.forward(scratch_, rhs1_[i]);
      for (std::size_t m = 0; m < n; ++m) rhs1_[i][m] = base1[m] - rhs1_[i][m];

      for (std::size_t p = 0; p < n; ++p) scratch_[p] = stage_Q_[i][p];
      grid.forward(scratch_, q_hat_[i]);
    }
    for (std::size_t i = 0; i < su; ++i) {
      ComplexField& r2 = rhs2_[i];
      std::copy(base2[i].begin(), base2[i].end(), r2.begin());
      for (std::size_t j = 0; j < su; ++j) {
        const double w = dt * tableau_.A(static_cast<int>(i), static_cast<int>(j));
        for (std::size_t m = 0; m < n; ++m) r2[m] += w * lap[m] * q_hat_[j][m];
      }
    }

    blocks.solve_k1(rhs1_);
    blocks.solve_k2(rhs2_);

    double update = 0.0;
    for (std::size_t i = 0; i < su; ++i) {
      grid.inverse(rhs1_[i], k1_next_[i]);
      update = std::max(update, sup_diff(k1_next_[i], out.k1[i]));
      std::swap(out.k1[i], k1_next_[i]);

      grid.inverse(rhs2_[i], scratch_);
      RealField& k2i = out.k2[i];
      for (std::size_t p = 0; p < n; ++p) {
        const double next = scratch_[p].real();
        update = std::max(update, std::abs(next - k2i[p]));
        k2i[p] = next;
      }
    }

    out.iterations = iter;
    out.last_update = update;
    if (update < params_.fp_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

void Stepper::finalize_step(FieldState& state, const StageSlopes& slopes, double dt) const {
  const SpectralGrid& grid = *grid_;
  const int s = tableau_.stages;
  const auto su = static_cast<std::size_t>(s);
  const std::size_t n = grid.size();
  const double e2 = params_.epsilon * params_.epsilon;

  if (slopes.k1.size() != su || slopes.k2.size() != su) {
    throw ShapeError("finalize_step: slope stage count does not match tableau");
  }

  RealField q_base(n);
  if (params_.track_q) {
    q_base = *state.q;
  } else {
    for (std::size_t p = 0; p < n; ++p) q_base[p] = std::norm(state.E[p]);
  }

  // Stage values from the final slopes.
  std::vector<ComplexField> Ei(su, state.E);
  std::vector<RealField> Ni(su, state.N);
  for (std::size_t i = 0; i < su; ++i) {
    for (std::size_t j = 0; j < su; ++j) {
      const double w = dt * tableau_.A(static_cast<int>(i), static_cast<int>(j));
      for (std::size_t p = 0; p < n; ++p) {
        Ei[i][p] += w * slopes.k1[j][p];
        Ni[i][p] += w * slopes.k2[j][p];
      }
    }
  }

  std::vector<RealField> k4(su, RealField(n));
  for (std::size_t i = 0; i < su; ++i) {
    for (std::size_t p = 0; p < n; ++p) k4[i][p] = 2.0 * (std::conj(Ei[i][p]) * slopes.k1[i][p]).real();
  }

  // k3_i = N_i - eps^2 Delta_h N_i + Q_i, then v^{n+1}.
  for (std::size_t i = 0; i < su; ++i) {
    const RealField lapN = apply_laplacian(grid, Ni[i], 1);
    const double wb = dt * tableau_.b[i];
    for (std::size_t p = 0; p < n; ++p) {
      double Q = q_base[p];
      for (std::size_t j = 0; j < su; ++j) {
        Q += dt * tableau_.A(static_cast<int>(i), static_cast<int>(j)) * k4[j][p];
      }
      const double k3 = Ni[i][p] - e2 * lapN[p] + Q;
      state.v[p] += wb * k3;
    }
  }

  for (std::size_t i = 0; i < su; ++i) {
    const double wb = dt * tableau_.b[i];
    for (std::size_t p = 0; p < n; ++p) {
      state.E[p] += wb * slopes.k1[i][p];
      state.N[p] += wb * slopes.k2[i][p];
    }
    if (params_.track_q) {
      RealField& q = *state.q;
      for (std::size_t p = 0; p < n; ++p) q[p] += wb * k4[i][p];
    }
  }
  state.t += dt;
}

StepStats Stepper::step(FieldState& state, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgumentError("Stepper::step: dt must be finite and nonzero");
  StageSlopes slopes = fixed_point_step(state, dt);
  if (!slopes.converged) {
    std::ostringstream msg;
    msg << "fixed-point iteration did not converge at t = " << state.t << " after " << slopes.iterations
        << " sweeps (last update " << slopes.last_update << ", tolerance " << params_.fp_tol << ")";
    if (params_.nonconvergence_policy == NonconvergencePolicy::abort) {
      throw NonconvergenceError(msg.str(), state.t, slopes.iterations, slopes.last_update);
    }
    std::clog << "warning: " << msg.str() << "; continuing with the last iterate\n";
  }
  finalize_step(state, slopes, dt);
  return {slopes.iterations, slopes.converged, slopes.last_update};
}

std::size_t step_count(double final_time, double tau) {
  if (!(tau > 0.0)) throw InvalidArgumentError("tau must be positive");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
    throw InvalidArgumentError("integration interval must be non-negative");
  }
  const double ratio = final_time / tau;
  const double J = std::round(ratio);
  if (std::abs(J * tau - final_time) > 1e-12 * std::max(final_time, tau)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "final time " << final_time << " is not an integer multiple of tau = " << tau;
    throw InvalidArgumentError(msg.str());
  }
  return static_cast<std::size_t>(J);
}

FieldState run(FieldState state0, const SolverParams& params, const RkTableau& tableau, double T,
               std::span<const Observer> observers) {
  const std::size_t J = step_count(T - state0.t, params.tau);
  const double t0 = state0.t;
  Stepper stepper(state0.grid, tableau, params);

  StepInfo info;
  for (const auto& obs : observers) {
    if (obs.stride < 1) throw InvalidArgumentError("observer stride must be >= 1");
    obs.callback(state0, info);
  }
  for (std::size_t n = 1; n <= J; ++n) {
    StepStats stats;
    try {
      stats = stepper.step(state0);
    } catch (const NonconvergenceError& e) {
      std::ostringstream msg;
      msg << "step " << n << " of " << J << ": " << e.what();
      throw NonconvergenceError(msg.str(), e.time(), e.iterations(), e.last_update());
    }
    // Pin the clock to the step grid so long runs do not accumulate drift.
    state0.t = t0 + static_cast<double>(n) * params.tau;
    info = {n, stats.iterations, stats.converged};
    for (const auto& obs : observers) {
      if (n % obs.stride == 0) obs.callback(state0, info);
    }
  }
  return state0;
}

}  // namespace qzs
