#pragma once

#include <stdexcept>
#include <string>

namespace medosc {

// cube or cell outside the grid
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// malformed input document; field names the offending key
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// parameter outside the admissible range of an operation
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// bisection did not converge, norm undefined, ...
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// unknown suite, generator, family ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace medosc
