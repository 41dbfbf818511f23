#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qzs {

using Complex = std::complex<double>;
using ComplexField = std::vector<Complex>;
using RealField = std::vector<double>;

/// Half-open periodic interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

enum class Axis { x, y };

/// Grid description without the FFT machinery; what configs and snapshots carry.
struct GridSpec {
  int dims = 1;
  Interval x{};
  int nx = 0;
  Interval y{0.0, 1.0};
  int ny = 1;
};

/*!
 * Periodic tensor-product collocation grid on [a,b) (x) [c,d).
 *
 * Fields live on a flat row-major array indexed as k * nx + j, with j the x
 * index and k the y index (ny == 1 in 1D).
 *
 * FFT convention: forward() is the unnormalized DFT
 *   F_m = sum_j f_j exp(-2 pi i j m / N),
 * inverse() carries the 1/N factor, so inverse(forward(f)) == f. Every spectral
 * multiplier in the library is applied as a forward -> multiply -> inverse
 * sandwich and is therefore independent of this choice.
 *
 * Mode index m is stored in FFT order [0, 1, ..., N/2, -N/2+1, ..., -1]; the
 * per-axis Laplacian eigenvalue is -mu^2 m^2 with mu = 2 pi / (b - a).
 *
 * Immutable after construction. The transform members are const and may be
 * called concurrently on distinct buffers.
 */
class SpectralGrid {
 public:
  explicit SpectralGrid(const GridSpec& spec);
  ~SpectralGrid();

  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  const GridSpec& spec() const { return spec_; }
  int dims() const { return spec_.dims; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  std::size_t size() const { return size_; }

  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double mu_x() const { return mu_x_; }
  double mu_y() const { return mu_y_; }
  /// h_x in 1D, h_x h_y in 2D: the weight of the discrete inner product.
  double cell_volume() const { return dims() == 1 ? hx_ : hx_ * hy_; }
  /// |Omega|.
  double domain_measure() const;

  const RealField& x_nodes() const { return x_nodes_; }
  const RealField& y_nodes() const { return y_nodes_; }
  double x_at(std::size_t flat) const { return x_nodes_[flat % static_cast<std::size_t>(nx())]; }
  double y_at(std::size_t flat) const { return y_nodes_[flat / static_cast<std::size_t>(nx())]; }

  /// Lambda_theta for one axis, FFT order.
  const RealField& axis_eigenvalues(Axis axis) const;
  /// Delta_{j,k} = (Lambda_x)_j + (Lambda_y)_k, flat row-major.
  const RealField& laplacian_multiplier() const { return laplacian_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

  ComplexField forward(std::span<const Complex> in) const;
  ComplexField forward(std::span<const double> in) const;
  ComplexField inverse(std::span<const Complex> in) const;
  /// Inverse transform keeping only the real part.
  RealField inverse_real(std::span<const Complex> in) const;

  void check_shape(std::size_t length) const;

 private:
  struct Plans;

  GridSpec spec_;
  std::size_t size_ = 0;
  double hx_ = 0.0, hy_ = 1.0;
  double mu_x_ = 0.0, mu_y_ = 0.0;
  RealField x_nodes_, y_nodes_;
  RealField lambda_x_, lambda_y_;
  RealField laplacian_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(const GridSpec& spec);
GridPtr make_grid(Interval x, int nx);
GridPtr make_grid(Interval x, int nx, Interval y, int ny);

/// Delta_h^power f for power in {1, 2}.
RealField apply_laplacian(const SpectralGrid& grid, std::span<const double> field, int power = 1);
ComplexField apply_laplacian(const SpectralGrid& grid, std::span<const Complex> field,
                             int power = 1);

/// Small dense row-major matrix, used by test oracles.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Explicit Fourier collocation second-derivative matrix D2 along one axis.
/// O(N^2); intended only as an oracle for apply_laplacian.
DenseMatrix dense_d2_matrix(const SpectralGrid& grid, Axis axis);

}  // namespace qzs
