#pragma once

#include <stdexcept>
#include <string>

namespace asgcn {

/// Shape or index mismatch between operands.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file; message carries file and line number.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid input that violates a semantic invariant.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NaN/Inf reached a value that must stay finite, or training diverged.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad run configuration (unknown sampler id, missing field, ...).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A proposal distribution assigns zero mass where the target is positive.
struct support_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace asgcn
