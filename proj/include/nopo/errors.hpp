#pragma once

#include <stdexcept>
#include <string>

namespace nopo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or specification violation (bad parameters, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: divergence, overflow, loss of accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading configs or writing outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nopo
