#pragma once

#include <stdexcept>
#include <string>

namespace knotforge {

// Error taxonomy. Every failure mode thrown by the library derives from
// knotforge::error so callers can catch the whole family at the CLI boundary.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed combinatorial structure (bad valence, broken Wilson cycle, ...).
struct structural_error : error {
    using error::error;
};

// Invalid argument at an operation boundary.
struct argument_error : error {
    using error::error;
};

// Operation requires a choice the inputs do not determine.
struct ambiguity_error : error {
    using error::error;
};

// Diagram or vector leaves the active truncation window.
struct window_error : error {
    using error::error;
};

// Configurable resource cap exceeded.
struct resource_error : error {
    using error::error;
};

// Internal cross-check failed (two routes disagree).
struct consistency_error : error {
    using error::error;
};

// Input data violates a documented invariant.
struct invariant_violation : error {
    using error::error;
};

// Unparseable or schema-violating input file.
struct ingestion_error : error {
    using error::error;
};

// Exact integer arithmetic overflowed.
struct arithmetic_error : error {
    using error::error;
};

// Side condition on a surgery scheme violated.
struct constraint_error : error {
    using error::error;
};

} // namespace knotforge
