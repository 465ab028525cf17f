#pragma once

#include <stdexcept>

namespace qdk {

// Invalid mathematical input (bad group data, mismatched dimensions, ...).
class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a computation would exceed a documented size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdk
