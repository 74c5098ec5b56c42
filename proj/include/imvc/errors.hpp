#pragma once

#include <stdexcept>
#include <string>

namespace imvc {

// Shape disagreement between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (e.g. log of 0).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid user-facing parameter (rates, counts, bandwidths).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Broken precondition between cooperating components.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// A view with no present samples.
struct EmptyViewError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset directory could not be read.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint is unreadable or does not fit the dataset/config.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Layer plan inconsistent with the data.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Training produced a non-finite loss.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace imvc
