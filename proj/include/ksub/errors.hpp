#pragma once

#include <stdexcept>
#include <string>

namespace ksub {

// Bad input: malformed instance data, dimension mismatches, violated
// preconditions. CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or rejection budget was exceeded; the request is refused
// rather than silently truncated. CLI exit code 3.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A guaranteed invariant failed at runtime (infeasible LP on monotone input,
// support overflow, failed witness replay). Indicates a bug or an input that
// violates its stated contract. CLI exit code 4.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ksub
