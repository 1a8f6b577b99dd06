#pragma once

#include <stdexcept>
#include <string>

namespace edgenav {

// Bad user input: malformed config values, inconsistent tables, empty traces.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content (CSV parse failures, bad checkpoint headers).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query outside the domain covered by a trace or table.
struct OutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal invariant broken (stale caches, impossible states).
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Offload requested while no edge capacity is granted.
struct ServiceUnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss or parameters during training.
struct TrainingDivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace edgenav
