#pragma once

#include <stdexcept>
#include <string>

namespace cyclemit {

/// Bad input: a parameter, configuration field or argument outside its domain.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The numerics could not produce a result (singular resolvent, non-finite output).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyclemit
