#pragma once

#include <stdexcept>

namespace vowel {

// Error categories; the CLI maps them to exit codes
// (config/usage -> 1, data -> 2, numerical -> 3).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vowel
