#pragma once

#include <stdexcept>
#include <string>

namespace cmvsub {

// Base class for every error the library raises. The subclasses map onto the
// CLI exit-code contract (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: out-of-disk coefficients, odd periods, windows that are too
// short, malformed words.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A rotation number whose continued fraction terminated early.
class RationalThetaError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A numeric post-condition failed (reality of traces, unitarity, ...).
class NumericAssertion : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace cmvsub
