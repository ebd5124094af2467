#pragma once

#include <stdexcept>
#include <string>

namespace mpdp {

/// Mismatched vector/matrix dimensions, or an empty input where one is required.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A time, state or action index outside its valid range.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// An ordered pair of indices (t_start, t_end) that is not ordered, or a window past the horizon.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Invalid numeric input: a non-stochastic row, a negative error bound, a short profile.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computation whose size exceeds the configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or infeasible experiment / environment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A file that cannot be read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mpdp
