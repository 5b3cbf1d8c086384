#pragma once

#include <stdexcept>
#include <string>

namespace jform {

// A series quotient left a nonzero remainder in some q-slice.
struct NonExactDivision : std::domain_error {
    explicit NonExactDivision(const std::string& what) : std::domain_error(what) {}
};

// A coefficient beyond the reliable truncation window was requested.
struct TruncationExceeded : std::out_of_range {
    explicit TruncationExceeded(const std::string& what) : std::out_of_range(what) {}
};

// An operation needs more q-orders than the operand carries.
struct InsufficientTruncation : std::invalid_argument {
    explicit InsufficientTruncation(const std::string& what) : std::invalid_argument(what) {}
};

// A built-in redundant cross-check failed: the library refuses to hand out
// data it cannot vouch for.  Reaching this is a bug, never a user error.
struct InternalCheckError : std::logic_error {
    explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

// A parametric elimination did not close (unexpected rank drop, a pivot
// denominator vanishing identically, or a quadratic with no rational root
// where one is required).
struct SymbolicEliminationFailure : std::runtime_error {
    explicit SymbolicEliminationFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jform
