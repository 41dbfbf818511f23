#pragma once

#include <optional>

#include "qzs/spectral_grid.hpp"

namespace qzs {

/// (E, N, v) at one time level, plus the auxiliary q = |E|^2 when it is
/// tracked explicitly for verification.
struct FieldState {
  GridPtr grid;
  ComplexField E;
  RealField N;
  RealField v;
  std::optional<RealField> q;
  double t = 0.0;

  /// Throws ShapeError if any field does not conform to grid.
  void validate() const;
};

}  // namespace qzs
