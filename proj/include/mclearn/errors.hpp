#pragma once

#include <stdexcept>

namespace mclearn {

// Domain or argument violation (bad sizes, out-of-range labels, malformed
// input files). CLI maps this to exit code 1.
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An explicit enumeration/memoization budget was exceeded. The message names
// the budget and the offending size. CLI maps this to exit code 2.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An interactive protocol was violated: unrealizable label feed, inconsistent
// oracle, out-of-range prediction. CLI maps this to exit code 3.
struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal invariant that should hold by theorem failed at runtime.
// CLI maps this to exit code 3.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mclearn
