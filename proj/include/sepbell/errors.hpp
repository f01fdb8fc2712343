#pragma once

#include <stdexcept>
#include <string>

namespace sepbell {

// Probability table breaks its own invariants (normalization, nonnegativity).
// Distinct from a no-signaling failure, which is a result, not an error.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad call arguments: unknown party, out-of-range outcome or index, size mismatch.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation undefined for the scenario (e.g. separations need binary outcomes).
struct UnsupportedScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration count or LP size above the configured cap.
struct CapExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal solver inconsistency. The no-signaling polytope is nonempty and
// bounded, so an infeasible or unbounded LP always signals a bug.
struct FormulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed proof text or JSON document.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sepbell
