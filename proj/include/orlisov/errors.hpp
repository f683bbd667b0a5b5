#pragma once

#include <stdexcept>
#include <string>

namespace orlisov {

/// Argument outside the domain of a mathematical operation (non-finite input,
/// failed bracketing of an inverse, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Young function that cannot be used (e.g. M vanishes at a positive point).
class InvalidFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Luxemburg bracketing ran out of doublings.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Inconsistent configuration: mismatched grids, bad keys, missing scheme.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orlisov
