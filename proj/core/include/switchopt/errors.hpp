#pragma once

#include <stdexcept>
#include <string>

namespace switchopt {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation: malformed arguments, inconsistent run configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad input data: parse failures, network validation failures, unknown ids.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: power flow did not converge where convergence is
/// required, evaluator produced non-finite objectives, and the like.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace switchopt
