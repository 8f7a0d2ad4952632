// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ldisc {

/// Base class for all ldisc errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (bad range, bad count, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; message carries the line number where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent matrix / dataset / structure dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole, singular return difference, singular shift.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Data carries no usable dynamics (zero Loewner pencil, constant data).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No stabilizing controller found within the restart budget.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// The identified loop transfer is unstable; gamma cannot be trusted.
class GammaEstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldisc
