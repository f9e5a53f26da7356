#pragma once

#include <stdexcept>
#include <string>

namespace trimpcr {

// Root of the library's exception hierarchy. Contract violations on plain
// arguments (k out of range, negative penalty, ...) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input (missing file, bad CSV/JSON).
class InputError : public Error {
 public:
  using Error::Error;
};

// Shapes that do not line up (X rows vs y length, X0 vs X_star, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A brute-force routine was asked to enumerate more rows than its cap allows.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient input where full rank is required, or no admissible subset.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace trimpcr
