#pragma once

#include <stdexcept>
#include <string>

namespace cergm {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes (invalid config 2, infeasible window 3, numerical 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem too large for exact treatment (enumeration gate, brute-force cube).
class SizeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A constraint window that admits no admissible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// The constant-graphon reduction is not justified for this model.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateProfileError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cergm
