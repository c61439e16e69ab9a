#pragma once

#include <stdexcept>
#include <string>

namespace weil {

// Error hierarchy. The CLI maps these onto exit codes:
// InvalidArgument/PreconditionError/ParseError -> 2, SingularSystem -> 3, IoError -> 4.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A premise of a bound (prime size, nonzero polynomial, ...) does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weil
