#pragma once

#include <stdexcept>
#include <string>

namespace poissonity {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter or argument outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation is not defined for the given alternative family.
class UnsupportedSpecError : public Error {
 public:
  using Error::Error;
};

// Statistic cannot be evaluated on the sample (e.g. zero sample mean).
class UndefinedStatisticError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace poissonity
