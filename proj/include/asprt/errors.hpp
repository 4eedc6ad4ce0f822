#pragma once

#include <stdexcept>
#include <string>

namespace asprt {

/// Argument outside the domain of a density, threshold or parameter.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation not available for the given distribution family.
class UnsupportedVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what + " (achieved error estimate " +
                           std::to_string(achieved_error) + ")"),
        achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Malformed configuration document.  `location` is a JSON pointer.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace asprt
