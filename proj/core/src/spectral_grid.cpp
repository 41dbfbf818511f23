#include "qzs/spectral_grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

// The FFTW planner is not re-entrant; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

RealField axis_eigenvalues_for(int n, double mu) {
  RealField lambda(static_cast<std::size_t>(n));
  for (int idx = 0; idx < n; ++idx) {
    const int m = idx <= n / 2 ? idx : idx - n;
    lambda[static_cast<std::size_t>(idx)] = -mu * mu * static_cast<double>(m) * static_cast<double>(m);
  }
  return lambda;
}

void validate_axis(const Interval& iv, int n, const char* name) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidGridError(std::string("grid: ") + name + " point count must be even and >= 4, got " +
                           std::to_string(n));
  }
  if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw InvalidDomainError(std::string("grid: ") + name + " bounds must satisfy lo < hi");
  }
}

}  // namespace

struct SpectralGrid::Plans {
  fftw_plan forward_oop = nullptr;
  fftw_plan inverse_oop = nullptr;
  fftw_plan forward_ip = nullptr;
  fftw_plan inverse_ip = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {forward_oop, inverse_oop, forward_ip, inverse_ip}) {
      if (p != nullptr) fftw_destroy_plan(p);
    }
  }
};

SpectralGrid::SpectralGrid(const GridSpec& spec) : spec_(spec) {
  if (spec.dims != 1 && spec.dims != 2) {
    throw InvalidGridError("grid: dims must be 1 or 2, got " + std::to_string(spec.dims));
  }
  validate_axis(spec.x, spec.nx, "x");
  if (spec.dims == 2) {
    validate_axis(spec.y, spec.ny, "y");
  } else {
    spec_.ny = 1;
    spec_.y = Interval{0.0, 1.0};
  }

  size_ = static_cast<std::size_t>(spec_.nx) * static_cast<std::size_t>(spec_.ny);
  hx_ = spec_.x.length() / spec_.nx;
  mu_x_ = 2.0 * std::numbers::pi / spec_.x.length();
  x_nodes_.resize(static_cast<std::size_t>(spec_.nx));
  for (int j = 0; j < spec_.nx; ++j) x_nodes_[static_cast<std::size_t>(j)] = spec_.x.lo + j * hx_;
  lambda_x_ = axis_eigenvalues_for(spec_.nx, mu_x_);

  if (spec_.dims == 2) {
    hy_ = spec_.y.length() / spec_.ny;
    mu_y_ = 2.0 * std::numbers::pi / spec_.y.length();
    y_nodes_.resize(static_cast<std::size_t>(spec_.ny));
    for (int k = 0; k < spec_.ny; ++k) y_nodes_[static_cast<std::size_t>(k)] = spec_.y.lo + k * hy_;
    lambda_y_ = axis_eigenvalues_for(spec_.ny, mu_y_);
  } else {
    hy_ = 1.0;
    mu_y_ = 0.0;
    y_nodes_ = {0.0};
    lambda_y_ = {0.0};
  }

  laplacian_.resize(size_);
  for (std::size_t k = 0; k < lambda_y_.size(); ++k) {
    for (std::size_t j = 0; j < lambda_x_.size(); ++j) {
      laplacian_[k * lambda_x_.size() + j] = lambda_x_[j] + lambda_y_[k];
    }
  }

  plans_ = std::make_unique<Plans>();
  ComplexField a(size_), b(size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (spec_.dims == 1) {
    plans_->forward_oop = fftw_plan_dft_1d(spec_.nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    plans_->inverse_oop = fftw_plan_dft_1d(spec_.nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    plans_->forward_ip = fftw_plan_dft_1d(spec_.nx, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    plans_->inverse_ip = fftw_plan_dft_1d(spec_.nx, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
  } else {
    // Row-major [k][j]: the slow index is y.
    plans_->forward_oop =
        fftw_plan_dft_2d(spec_.ny, spec_.nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    plans_->inverse_oop =
        fftw_plan_dft_2d(spec_.ny, spec_.nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    plans_->forward_ip =
        fftw_plan_dft_2d(spec_.ny, spec_.nx, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    plans_->inverse_ip =
        fftw_plan_dft_2d(spec_.ny, spec_.nx, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
  }
  if (!plans_->forward_oop || !plans_->inverse_oop || !plans_->forward_ip || !plans_->inverse_ip) {
    throw Error("grid: FFTW failed to create a plan");
  }
}

SpectralGrid::~SpectralGrid() = default;

double SpectralGrid::domain_measure() const {
  return dims() == 1 ? spec_.x.length() : spec_.x.length() * spec_.y.length();
}

const RealField& SpectralGrid::axis_eigenvalues(Axis axis) const {
  if (axis == Axis::y && dims() == 1) throw DimensionError("grid: 1D grid has no y axis");
  return axis == Axis::x ? lambda_x_ : lambda_y_;
}

void SpectralGrid::check_shape(std::size_t length) const {
  if (length != size_) {
    throw ShapeError("field length " + std::to_string(length) + " does not match grid size " +
                     std::to_string(size_));
  }
}

void SpectralGrid::forward(std::span<const Complex> in, std::span<Complex> out) const {
  check_shape(in.size());
  check_shape(out.size());
  if (in.data() == out.data()) {
    fftw_execute_dft(plans_->forward_ip, as_fftw(out.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans_->forward_oop, as_fftw(in.data()), as_fftw(out.data()));
  }
}

void SpectralGrid::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  check_shape(in.size());
  check_shape(out.size());
  if (in.data() == out.data()) {
    fftw_execute_dft(plans_->inverse_ip, as_fftw(out.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans_->inverse_oop, as_fftw(in.data()), as_fftw(out.data()));
  }
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& z : out) z *= scale;
}

ComplexField SpectralGrid::forward(std::span<const Complex> in) const {
  ComplexField out(in.size());
  forward(in, out);
  return out;
}

ComplexField SpectralGrid::forward(std::span<const double> in) const {
  check_shape(in.size());
  ComplexField out(in.begin(), in.end());
  forward(out, out);
  return out;
}

ComplexField SpectralGrid::inverse(std::span<const Complex> in) const {
  ComplexField out(in.size());
  inverse(in, out);
  return out;
}

RealField SpectralGrid::inverse_real(std::span<const Complex> in) const {
  ComplexField tmp = inverse(in);
  RealField out(tmp.size());
  for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
  return out;
}

GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const SpectralGrid>(spec); }

GridPtr make_grid(Interval x, int nx) {
  GridSpec spec;
  spec.dims = 1;
  spec.x = x;
  spec.nx = nx;
  return make_grid(spec);
}

GridPtr make_grid(Interval x, int nx, Interval y, int ny) {
  GridSpec spec;
  spec.dims = 2;
  spec.x = x;
  spec.nx = nx;
  spec.y = y;
  spec.ny = ny;
  return make_grid(spec);
}

namespace {

void check_power(int power) {
  if (power != 1 && power != 2) {
    throw InvalidArgumentError("apply_laplacian: power must be 1 or 2, got " + std::to_string(power));
  }
}

void multiply_laplacian(const SpectralGrid& grid, ComplexField& hat, int power) {
  const RealField& lap = grid.laplacian_multiplier();
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double m = power == 1 ? lap[i] : lap[i] * lap[i];
    hat[i] *= m;
  }
}

}  // namespace

RealField apply_laplacian(const SpectralGrid& grid, std::span<const double> field, int power) {
  check_power(power);
  ComplexField hat = grid.forward(field);
  multiply_laplacian(grid, hat, power);
  return grid.inverse_real(hat);
}

ComplexField apply_laplacian(const SpectralGrid& grid, std::span<const Complex> field, int power) {
  check_power(power);
  ComplexField hat = grid.forward(field);
  multiply_laplacian(grid, hat, power);
  grid.inverse(hat, hat);
  return hat;
}

DenseMatrix dense_d2_matrix(const SpectralGrid& grid, Axis axis) {
  const int n = axis == Axis::x ? grid.nx() : grid.ny();
  if (axis == Axis::y && grid.dims() == 1) throw DimensionError("dense_d2_matrix: 1D grid has no y axis");
  const double mu = axis == Axis::x ? grid.mu_x() : grid.mu_y();
  const double h = axis == Axis::x ? grid.hx() : grid.hy();

  DenseMatrix d2{static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                 std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double value;
      if (j == k) {
        value = -mu * mu * (static_cast<double>(n) * n + 2.0) / 12.0;
      } else {
        const double s = std::sin(mu * (j - k) * h / 2.0);
        const double sign = ((j + k + 1) % 2 == 0) ? 1.0 : -1.0;
        value = 0.5 * mu * mu * sign / (s * s);
      }
      d2(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = value;
    }
  }
  return d2;
}

}  // namespace qzs
