#pragma once

#include <stdexcept>
#include <string>

namespace afnls {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside the admissible parameter domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative method failed to meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Grid too coarse or box too small for the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf encountered in field data.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

}  // namespace afnls
