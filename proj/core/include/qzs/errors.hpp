#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qzs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class InvalidDomainError : public Error {
 public:
  using Error::Error;
};

/// Field length does not match the grid it is used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a 1D grid but got 2D, or the other way round.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// N1 violates the zero-mean compatibility condition.
class CompatibilityError : public Error {
 public:
  CompatibilityError(const std::string& what, double mean) : Error(what), mean_(mean) {}
  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

/// A per-mode stage block is numerically singular.
class SingularBlockError : public Error {
 public:
  SingularBlockError(const std::string& what, std::size_t mode) : Error(what), mode_(mode) {}
  std::size_t mode() const noexcept { return mode_; }

 private:
  std::size_t mode_;
};

/// Fixed-point stage iteration hit its cap without meeting the tolerance.
class NonconvergenceError : public Error {
 public:
  NonconvergenceError(const std::string& what, double time, int iterations, double update)
      : Error(what), time_(time), iterations_(iterations), update_(update) {}
  double time() const noexcept { return time_; }
  int iterations() const noexcept { return iterations_; }
  double last_update() const noexcept { return update_; }

 private:
  double time_;
  int iterations_;
  double update_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SnapshotMagicError : public IoError {
 public:
  using IoError::IoError;
};

class SnapshotTruncatedError : public IoError {
 public:
  using IoError::IoError;
};

class SnapshotSizeError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace qzs
