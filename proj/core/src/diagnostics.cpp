#include "qzs/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

double dot(const RealField& a, const RealField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * std::conj(b[i])).real();
  return s;
}

double residual(double value, double base, bool absolute) {
  return absolute ? std::abs(value - base) : std::abs((value - base) / base);
}

}  // namespace

double mass(const FieldState& state) {
  state.validate();
  double s = 0.0;
  for (const Complex& e : state.E) s += std::norm(e);
  return state.grid->cell_volume() * s;
}

double hamiltonian(const FieldState& state, double epsilon) {
  state.validate();
  const SpectralGrid& grid = *state.grid;
  const double e2 = epsilon * epsilon;

  const ComplexField lapE = apply_laplacian(grid, std::span<const Complex>(state.E), 1);
  const RealField lapN = apply_laplacian(grid, std::span<const double>(state.N), 1);
  const RealField lapV = apply_laplacian(grid, std::span<const double>(state.v), 1);

  double coupling = 0.0;
  for (std::size_t i = 0; i < state.E.size(); ++i) coupling += state.N[i] * std::norm(state.E[i]);

  const double sum = dot(lapE, state.E) - e2 * dot(lapE, lapE) - 0.5 * dot(state.N, state.N) +
                     0.5 * e2 * dot(lapN, state.N) - coupling + 0.5 * dot(lapV, state.v);
  return grid.cell_volume() * sum;
}

ErrorNorms error_norms(const FieldState& state, const ComplexField& E_ref, const RealField& N_ref) {
  state.validate();
  if (E_ref.size() != state.E.size() || N_ref.size() != state.N.size()) {
    throw ShapeError("error_norms: reference does not match the state grid");
  }
  ErrorNorms out;
  for (std::size_t i = 0; i < state.E.size(); ++i) {
    out.e = std::max(out.e, std::abs(state.E[i] - E_ref[i]));
    out.n = std::max(out.n, std::abs(state.N[i] - N_ref[i]));
  }
  return out;
}

ErrorNorms error_norms(const FieldState& state, const FieldState& reference) {
  const GridSpec& a = state.grid->spec();
  const GridSpec& b = reference.grid->spec();
  if (a.dims != b.dims || a.nx != b.nx || a.ny != b.ny || a.x.lo != b.x.lo || a.x.hi != b.x.hi ||
      a.y.lo != b.y.lo || a.y.hi != b.y.hi) {
    throw ShapeError("error_norms: state and reference live on different grids");
  }
  return error_norms(state, reference.E, reference.N);
}

std::optional<double> q_defect(const FieldState& state) {
  if (!state.q) return std::nullopt;
  state.validate();
  double worst = 0.0;
  for (std::size_t i = 0; i < state.E.size(); ++i) {
    worst = std::max(worst, std::abs((*state.q)[i] - std::norm(state.E[i])));
  }
  return worst;
}

ResidualSeries relative_residual_series(const std::vector<DiagnosticsRecord>& records) {
  ResidualSeries out;
  if (records.empty()) return out;
  const DiagnosticsRecord& base = records.front();
  out.mass_absolute = base.mass == 0.0;
  out.energy_absolute = base.energy == 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const DiagnosticsRecord& r = records[i];
    out.points.push_back({r.t, residual(r.mass, base.mass, out.mass_absolute),
                          residual(r.energy, base.energy, out.energy_absolute)});
  }
  return out;
}

void DiagnosticsRecorder::record(const FieldState& state, const StepInfo& info) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.mass = mass(state);
  r.energy = hamiltonian(state, epsilon_);
  r.q_defect = q_defect(state);
  r.fp_iterations = info.fp_iterations;
  if (!records_.empty()) {
    const DiagnosticsRecord& base = records_.front();
    r.rm = residual(r.mass, base.mass, base.mass == 0.0);
    r.rh = residual(r.energy, base.energy, base.energy == 0.0);
  }
  records_.push_back(r);
}

Observer DiagnosticsRecorder::observer(std::size_t stride) {
  return {stride, [this](const FieldState& s, const StepInfo& info) { record(s, info); }};
}

double DiagnosticsRecorder::max_rm() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, r.rm);
  return m;
}

double DiagnosticsRecorder::max_rh() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, r.rh);
  return m;
}

std::optional<double> DiagnosticsRecorder::max_q_defect() const {
  std::optional<double> m;
  for (const auto& r : records_) {
    if (r.q_defect) m = std::max(m.value_or(0.0), *r.q_defect);
  }
  return m;
}

}  // namespace qzs
