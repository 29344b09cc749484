#pragma once

#include <stdexcept>
#include <string>

namespace rjmix {

// Contract violation in caller-supplied values (bad config, bad state,
// malformed file). CLI maps this to exit code 1.
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or other numeric breakdown mid-computation.
// CLI maps this to exit code 2.
struct numeric_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Replication study exceeded its exclusion threshold. Exit code 3.
struct study_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rjmix
