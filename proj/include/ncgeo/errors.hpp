#pragma once

#include <stdexcept>
#include <string>

namespace ncgeo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition (non-tangent vector, bad size, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The Finsler metric is not a Minkowski norm at some point (drift norm >= 1).
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a closed-form bound is violated. The message names the inequality.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A discrete loop is too coarse for the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (normal forms, Morse data, configuration values).
class DataError : public Error {
 public:
  using Error::Error;
};

class IntegratorError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncgeo
