// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ltv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pulse does not fit the time grid (its tail exceeds 1e-12 of the peak).
class GridTooSmall : public Error {
 public:
  using Error::Error;
};

/// Two signals live on different time grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A sampled function does not cover the region it is evaluated on.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes of the same quantity disagree.
class OracleMismatch : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the domain of validity of a bound.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  PreconditionFailed(std::string condition, const std::string& what)
      : Error(what), condition_(std::move(condition)) {}

  /// Short identifier of the violated condition, e.g. "b>=p".
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace ltv
