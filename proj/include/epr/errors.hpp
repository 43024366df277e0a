#pragma once

#include <stdexcept>
#include <string>

namespace epr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Configuration file missing, malformed, or carrying unknown keys.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The grid cannot represent the requested packet. Carries the spacing that
/// would be sufficient.
class ResolutionError : public Error {
public:
  ResolutionError(const std::string& what, double required_dx)
      : Error(what), required_dx_(required_dx) {}
  double required_dx() const { return required_dx_; }

private:
  double required_dx_;
};

/// Successive quadrature refinements did not settle below the tolerance.
class QuadratureFailure : public Error {
public:
  QuadratureFailure(const std::string& what, double last_distance)
      : Error(what), last_distance_(last_distance) {}
  double last_distance() const { return last_distance_; }

private:
  double last_distance_;
};

/// An operation was asked for outside the range where it is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Probability mass reached the edges of the periodic box.
class BoundaryMassError : public Error {
public:
  BoundaryMassError(const std::string& what, double mass) : Error(what), mass_(mass) {}
  double mass() const { return mass_; }

private:
  double mass_;
};

class FitError : public Error {
public:
  using Error::Error;
};

}  // namespace epr
