#pragma once

#include <stdexcept>
#include <string>

namespace linseg {

// Violated precondition or invariant of a public operation.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value does not fit the target representation (e.g. label id > 65535 in a
// 16-bit PNG).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File was readable but its content has the wrong format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough distinct input to define the requested quantity.
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Synthetic line layout cannot be realized (e.g. overlapping masks).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linseg
