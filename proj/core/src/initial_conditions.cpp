#include "qzs/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qzs/errors.hpp"

namespace qzs {

void FieldState::validate() const {
  if (!grid) throw ShapeError("state has no grid");
  grid->check_shape(E.size());
  grid->check_shape(N.size());
  grid->check_shape(v.size());
  if (q) grid->check_shape(q->size());
}

namespace {

constexpr Complex kI{0.0, 1.0};

double sech(double x) { return 1.0 / std::cosh(x); }

void require_1d(const SpectralGrid& grid, const char* who) {
  if (grid.dims() != 1) throw DimensionError(std::string(who) + ": requires a 1D grid");
}

void require_subluminal(double V, const char* who) {
  if (!(std::abs(V) < 1.0)) {
    throw InvalidArgumentError(std::string(who) + ": soliton speed must satisfy |V| < 1");
  }
}

}  // namespace

InitialData init_zs_soliton(const SpectralGrid& grid, const SolitonParams& p) {
  require_1d(grid, "init_zs_soliton");
  require_subluminal(p.V, "init_zs_soliton");
  ExactFields at0 = exact_zs_solution(grid, p, 0.0);

  InitialData data;
  data.E0 = std::move(at0.E);
  data.N0 = std::move(at0.N);
  data.N1.resize(grid.size());
  const double b3 = p.B * p.B * p.B;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double xi = p.B * (grid.x_at(j) - p.x0);
    const double s = sech(xi);
    data.N1[j] = -4.0 * b3 * p.V * s * s * std::tanh(xi);
  }
  return data;
}

ExactFields exact_zs_solution(const SpectralGrid& grid, const SolitonParams& p, double t) {
  require_1d(grid, "exact_zs_solution");
  require_subluminal(p.V, "exact_zs_solution");
  const double amp = std::sqrt(2.0 * p.B * p.B * (1.0 - p.V * p.V));
  ExactFields out;
  out.E.resize(grid.size());
  out.N.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x_at(j);
    const double s = sech(p.B * (x - p.x0 - p.V * t));
    const double phase = p.V * (x - p.x0) / 2.0 - (p.V * p.V / 4.0 - p.B * p.B) * t;
    out.E[j] = kI * amp * s * std::polar(1.0, phase);
    out.N[j] = -2.0 * p.B * p.B * s * s;
  }
  return out;
}

InitialData init_cosine_2d(const SpectralGrid& grid) {
  if (grid.dims() != 2) throw DimensionError("init_cosine_2d: requires a 2D grid");
  InitialData data;
  data.E0.resize(grid.size());
  data.N0.assign(grid.size(), 0.0);
  data.N1.assign(grid.size(), 0.0);
  const double w = std::numbers::pi / 8.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double cx = std::cos(w * grid.x_at(i));
    const double cy = std::cos(w * grid.y_at(i));
    data.E0[i] = cx * cx * cy * cy;
  }
  return data;
}

InitialData init_two_solitons(const SpectralGrid& grid, const TwoSolitonParams& p) {
  require_1d(grid, "init_two_solitons");
  require_subluminal(p.V1, "init_two_solitons");
  require_subluminal(p.V2, "init_two_solitons");

  InitialData data;
  data.E0.assign(grid.size(), Complex{});
  data.N0.assign(grid.size(), 0.0);
  data.N1.assign(grid.size(), 0.0);
  const double centers[2] = {p.x1, p.x2};
  const double speeds[2] = {p.V1, p.V2};
  for (int s = 0; s < 2; ++s) {
    const double amp = std::sqrt(2.0 * (1.0 - speeds[s] * speeds[s]));
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double xi = grid.x_at(j) - centers[s];
      const double sh = sech(xi);
      data.E0[j] += kI * amp * sh * std::polar(1.0, speeds[s] * xi / 2.0);
      data.N0[j] += -2.0 * sh * sh;
      data.N1[j] += -4.0 * speeds[s] * sh * sh * std::tanh(xi);
    }
  }
  return data;
}

TwoSolitonParams collision_preset(CollisionCase c) {
  switch (c) {
    case CollisionCase::I:
      return {-30.0, 30.0, 0.5, -0.5};
    case CollisionCase::II:
      return {-30.0, 30.0, 0.75, -0.5};
    case CollisionCase::III:
      return {-5.0, 5.0, 0.75, -0.5};
  }
  throw InvalidArgumentError("collision_preset: unknown case");
}

CollisionCase parse_collision_case(const std::string& name) {
  if (name == "I" || name == "1") return CollisionCase::I;
  if (name == "II" || name == "2") return CollisionCase::II;
  if (name == "III" || name == "3") return CollisionCase::III;
  throw InvalidArgumentError("unknown collision case '" + name + "' (expected I, II or III)");
}

const char* to_string(CollisionCase c) {
  switch (c) {
    case CollisionCase::I:
      return "I";
    case CollisionCase::II:
      return "II";
    case CollisionCase::III:
      return "III";
  }
  return "?";
}

double pump_amplitude(double k, double epsilon) {
  return k / std::numbers::sqrt2 * (1.0 + epsilon * epsilon * k * k);
}

InitialData init_pump_wave(const SpectralGrid& grid, const PumpParams& p, double epsilon) {
  require_1d(grid, "init_pump_wave");
  const double amp = pump_amplitude(p.k, epsilon);
  InitialData data;
  // At epsilon = 0 the bound is attained with equality; only warn past it.
  if (!(p.k > 0.0 && p.k <= std::numbers::sqrt2 * amp * (1.0 + 1e-12))) {
    std::ostringstream msg;
    msg << "pump wave: k = " << p.k << " is outside 0 < k < sqrt(2) E0 = " << std::numbers::sqrt2 * amp
        << "; the modulational-instability condition does not hold";
    data.warnings.push_back(msg.str());
  }
  data.E0.resize(grid.size());
  data.N0.resize(grid.size());
  data.N1.assign(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double ckx = std::cos(p.k * grid.x_at(j));
    data.E0[j] = amp * (1.0 + p.beta * ckx);
    data.N0[j] = -std::numbers::sqrt2 * amp * p.k * p.beta * ckx;
  }
  return data;
}

RealField consistent_v0(const SpectralGrid& grid, std::span<const double> N1, double rel_tol,
                        double abs_floor) {
  grid.check_shape(N1.size());
  ComplexField hat = grid.forward(N1);
  const double mean = hat[0].real() / static_cast<double>(grid.size());
  double sup = 0.0;
  for (double value : N1) sup = std::max(sup, std::abs(value));
  const double tol = std::max(rel_tol * sup, abs_floor);
  if (std::abs(mean) > tol) {
    std::ostringstream msg;
    msg << "N1 violates the zero-mean compatibility condition: mean = " << mean << " (tolerance " << tol
        << ")";
    throw CompatibilityError(msg.str(), mean);
  }
  const RealField& lap = grid.laplacian_multiplier();
  hat[0] = 0.0;
  for (std::size_t i = 1; i < hat.size(); ++i) hat[i] /= lap[i];
  return grid.inverse_real(hat);
}

FieldState make_initial_state(GridPtr grid, const InitialData& data, bool track_q) {
  grid->check_shape(data.E0.size());
  grid->check_shape(data.N0.size());
  FieldState state;
  state.v = consistent_v0(*grid, data.N1);
  state.grid = std::move(grid);
  state.E = data.E0;
  state.N = data.N0;
  if (track_q) {
    RealField q(state.E.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::norm(state.E[i]);
    state.q = std::move(q);
  }
  state.t = 0.0;
  return state;
}

}  // namespace qzs
