#pragma once

#include <optional>
#include <vector>

#include "qzs/field_state.hpp"
#include "qzs/stepper.hpp"

namespace qzs {

/// M_h = <E, E>_h.
double mass(const FieldState& state);

/*!
 * Discrete Hamiltonian
 *   H_h = <Delta E, E> - eps^2 <Delta E, Delta E> - 1/2 <N, N>
 *         + eps^2/2 <Delta N, N> - <N, |E|^2> + 1/2 <Delta v, v>,
 * all inner products weighted by the cell volume. This is the negative of the
 * usual continuous energy; relative residuals do not depend on the sign.
 */
double hamiltonian(const FieldState& state, double epsilon);

struct ErrorNorms {
  double e = 0.0;
  double n = 0.0;
};

/// Sup-norm deviations of E and N from a reference on the same grid.
ErrorNorms error_norms(const FieldState& state, const ComplexField& E_ref, const RealField& N_ref);
ErrorNorms error_norms(const FieldState& state, const FieldState& reference);

/// ||q - |E|^2||_inf, or nullopt if q is not tracked.
std::optional<double> q_defect(const FieldState& state);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double rm = 0.0;
  double rh = 0.0;
  std::optional<double> q_defect;
  int fp_iterations = 0;
};

struct ResidualPoint {
  double t = 0.0;
  double rm = 0.0;
  double rh = 0.0;
};

struct ResidualSeries {
  std::vector<ResidualPoint> points;
  /// Set when the corresponding baseline is zero and absolute deviations are reported.
  bool mass_absolute = false;
  bool energy_absolute = false;
};

/// Residuals of every record after the first against the first.
ResidualSeries relative_residual_series(const std::vector<DiagnosticsRecord>& records);

/// Accumulates DiagnosticsRecords from a run() observer, filling rm and rh
/// against the first record it sees.
class DiagnosticsRecorder {
 public:
  explicit DiagnosticsRecorder(double epsilon) : epsilon_(epsilon) {}

  void record(const FieldState& state, const StepInfo& info);
  Observer observer(std::size_t stride);

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  double max_rm() const;
  double max_rh() const;
  /// Largest q defect seen, or nullopt if q was never tracked.
  std::optional<double> max_q_defect() const;

 private:
  double epsilon_;
  std::vector<DiagnosticsRecord> records_;
};

}  // namespace qzs
