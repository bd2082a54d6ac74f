#pragma once

#include <stdexcept>
#include <string>

namespace hcbo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DivisionDegenerate : public Error {
 public:
  using Error::Error;
};

class EmptyValidSet : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

class SingularKernel : public Error {
 public:
  using Error::Error;
};

/// Raised when a training set cannot be built because no evaluated point is viable.
class NoViablePoints : public Error {
 public:
  using Error::Error;
};

class InvalidVector : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcbo
