#pragma once

#include <stdexcept>
#include <string>

namespace kec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point outside the domain of an operation (zero section, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The base metric is not invertible to working precision.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// The positivity condition A > 0, v(t) > -A / (2 sqrt(t)) fails.
class PositivityError : public Error {
 public:
  PositivityError(double t, double v, double a_metric)
      : Error("metric positivity violated at t=" + std::to_string(t) + ": v(t)=" +
              std::to_string(v) + ", a_metric=" + std::to_string(a_metric)),
        t_(t),
        v_(v) {}

  double t() const noexcept { return t_; }
  double v() const noexcept { return v_; }

 private:
  double t_;
  double v_;
};

/// An operation was called outside its stated precondition (e.g. a
/// Kähler-only formula on a non-integrable configuration).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil produced a non-finite value or the step
/// underflowed.
class FiniteDifferenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace kec
