#pragma once

#include <stdexcept>
#include <string>

namespace momtensor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extents, mode sets or dimensions do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A size, enumeration or overflow limit would be exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument is outside its domain (odd order where even is
/// required, non-positive step, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Distribution parameters are not valid (asymmetric or indefinite
/// covariance, singular covariance where a density is requested).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input (tensor JSON/binary, sample CSV, params).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace momtensor
