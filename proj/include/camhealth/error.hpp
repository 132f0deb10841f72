#pragma once

#include <stdexcept>
#include <string>

namespace camhealth {

// Caller passed parameters that violate an operation's contract.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data cannot be used: unreadable files, missing sidecars, patches
// without usable content.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query fell outside the domain of a table or grid.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace camhealth
