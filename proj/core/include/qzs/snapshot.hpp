#pragma once

#include <cstdint>
#include <string>

#include "qzs/field_state.hpp"

namespace qzs {

/*!
 * Binary field snapshot, little-endian throughout:
 *
 *   "QZS1"
 *   u32 dims, u32 nx, u32 ny            (ny = 1 in 1D)
 *   f64 a, b [, c, d]                   domain bounds
 *   f64 t, f64 epsilon
 *   E as interleaved (re, im) f64, then N, then v, row-major
 *   u8 q present, then q as f64 if present
 */
inline constexpr char kSnapshotMagic[4] = {'Q', 'Z', 'S', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  FieldState state;
  double epsilon = 0.0;
};

/// Exact file size in bytes for the given layout.
std::size_t snapshot_size(int dims, std::size_t points, bool has_q);

void write_snapshot(const FieldState& state, double epsilon, const std::string& path);

/// Throws SnapshotMagicError, SnapshotTruncatedError or SnapshotSizeError.
Snapshot read_snapshot(const std::string& path);

}  // namespace qzs
