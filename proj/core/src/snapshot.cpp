#include "qzs/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

template <typename T>
void put(std::vector<char>& buf, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

class Cursor {
 public:
  Cursor(const std::vector<char>& buf, const std::string& path) : buf_(buf), path_(path) {}

  template <typename T>
  T take() {
    if (pos_ + sizeof(T) > buf_.size()) {
      throw SnapshotTruncatedError("snapshot '" + path_ + "' is truncated at byte " + std::to_string(pos_));
    }
    char bytes[sizeof(T)];
    std::memcpy(bytes, buf_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::vector<char>& buf_;
  const std::string& path_;
  std::size_t pos_ = 4;
};

}  // namespace

std::size_t snapshot_size(int dims, std::size_t points, bool has_q) {
  const std::size_t header = 4 + 3 * 4 + (dims == 2 ? 4 : 2) * 8 + 2 * 8;
  return header + (2 + 1 + 1 + (has_q ? 1 : 0)) * 8 * points + 1;
}

void write_snapshot(const FieldState& state, double epsilon, const std::string& path) {
  state.validate();
  const GridSpec& g = state.grid->spec();
  std::vector<char> buf(kSnapshotMagic, kSnapshotMagic + 4);
  buf.reserve(snapshot_size(g.dims, state.E.size(), state.q.has_value()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dims));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dims == 2 ? g.ny : 1));
  put(buf, g.x.lo);
  put(buf, g.x.hi);
  if (g.dims == 2) {
    put(buf, g.y.lo);
    put(buf, g.y.hi);
  }
  put(buf, state.t);
  put(buf, epsilon);
  for (const Complex& e : state.E) {
    put(buf, e.real());
    put(buf, e.imag());
  }
  for (double x : state.N) put(buf, x);
  for (double x : state.v) put(buf, x);
  put<std::uint8_t>(buf, state.q ? 1 : 0);
  if (state.q) {
    for (double x : *state.q) put(buf, x);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < 4 || !std::equal(kSnapshotMagic, kSnapshotMagic + 4, buf.begin())) {
    throw SnapshotMagicError("'" + path + "' is not a QZS1 snapshot (bad magic)");
  }
  Cursor c(buf, path);
  const auto dims = c.take<std::uint32_t>();
  const auto nx = c.take<std::uint32_t>();
  const auto ny = c.take<std::uint32_t>();
  if (dims != 1 && dims != 2) throw SnapshotSizeError("snapshot '" + path + "': dims must be 1 or 2");
  if (dims == 1 && ny != 1) throw SnapshotSizeError("snapshot '" + path + "': 1D snapshot with ny != 1");

  GridSpec spec;
  spec.dims = static_cast<int>(dims);
  spec.nx = static_cast<int>(nx);
  spec.x.lo = c.take<double>();
  spec.x.hi = c.take<double>();
  if (dims == 2) {
    spec.ny = static_cast<int>(ny);
    spec.y.lo = c.take<double>();
    spec.y.hi = c.take<double>();
  }
  const double t = c.take<double>();
  const double epsilon = c.take<double>();

  const std::size_t points = static_cast<std::size_t>(nx) * ny;
  const std::size_t without_q = snapshot_size(spec.dims, points, false);
  const std::size_t with_q = snapshot_size(spec.dims, points, true);
  if (buf.size() < without_q) {
    throw SnapshotTruncatedError("snapshot '" + path + "' is truncated: " + std::to_string(buf.size()) +
                                 " bytes, expected at least " + std::to_string(without_q));
  }
  const bool has_q = buf[without_q - 1] != 0;
  const std::size_t expected = has_q ? with_q : without_q;
  if (buf.size() < expected) {
    throw SnapshotTruncatedError("snapshot '" + path + "' is truncated: " + std::to_string(buf.size()) +
                                 " bytes, expected " + std::to_string(expected));
  }
  if (buf.size() != expected) {
    throw SnapshotSizeError("snapshot '" + path + "' has " + std::to_string(buf.size()) + " bytes, expected " +
                            std::to_string(expected));
  }

  Snapshot out;
  out.epsilon = epsilon;
  FieldState& s = out.state;
  try {
    s.grid = make_grid(spec);
  } catch (const Error& e) {
    throw SnapshotSizeError("snapshot '" + path + "': invalid grid header: " + e.what());
  }
  s.t = t;
  s.E.resize(points);
  s.N.resize(points);
  s.v.resize(points);
  for (auto& e : s.E) {
    const double re = c.take<double>();
    const double im = c.take<double>();
    e = {re, im};
  }
  for (auto& x : s.N) x = c.take<double>();
  for (auto& x : s.v) x = c.take<double>();
  c.take<std::uint8_t>();
  if (has_q) {
    RealField q(points);
    for (auto& x : q) x = c.take<double>();
    s.q = std::move(q);
  }
  return out;
}

}  // namespace qzs
