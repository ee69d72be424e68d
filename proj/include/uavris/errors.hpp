#pragma once

#include <stdexcept>
#include <string>

namespace uavris {

/// Caller passed arguments that violate an operation's preconditions.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Configuration file or struct is inconsistent or fails schema validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Environment used out of its reset/step lifecycle.
struct LifecycleError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Exhaustive search grid exceeds the configured evaluation budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uavris
