#pragma once

#include <stdexcept>
#include <string>

namespace sepkit {

// Bad arguments or contract violations at API boundaries.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (files, feature values).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An exact search ran past its node budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sepkit
