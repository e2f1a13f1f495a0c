// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ddtrack {

using Vec3 = Eigen::Vector3d;
using cdouble = std::complex<double>;
using cfloat = std::complex<float>;

/// Filter state [x, y, z, v_x, v_y, noise variance].
using StateVector = Eigen::Matrix<double, 6, 1>;
using StateMatrix = Eigen::Matrix<double, 6, 6>;
inline constexpr int kStateDim = 6;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file contents (CLI exit code 3).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Agent and anchor positions coincide, so directions and delays are undefined.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// All particles received zero likelihood (CLI exit code 4).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::int64_t step)
      : Error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

/// The regularization covariance could not be factorized even with jitter.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, std::int64_t step)
      : Error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace ddtrack
