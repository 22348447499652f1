#pragma once

#include <stdexcept>
#include <string>

namespace headkey {

// Input violates a documented precondition (non-finite sample, out-of-order
// timestamp, malformed file line, word outside the length window, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model or template set was used before it was trained / populated.
class NotReady : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace headkey
