#pragma once

#include <stdexcept>
#include <string>

namespace marl {

// Error categories surfaced by the CLI as machine-parsable prefixes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite losses or gradients; aborts the run with partial output retained.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace marl
