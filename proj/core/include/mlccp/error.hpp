#pragma once

#include <stdexcept>
#include <string>

namespace mlccp {

// Base class of every error raised by the library. The category is used by
// the command-line tool to pick an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or preconditions supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, matrices, models).
class DataError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: singular systems, non-finite outputs.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlccp
