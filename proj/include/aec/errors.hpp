#pragma once

#include <stdexcept>
#include <string>

namespace aec {

/// Bad user input: malformed files, infeasible parameters, violated call
/// preconditions. Maps to exit code 1 in the CLI.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A runtime invariant the algorithm guarantees has been observed to fail.
/// Never a recoverable condition; maps to exit code 3 in the CLI.
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace aec
