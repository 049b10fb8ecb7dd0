#pragma once

#include <stdexcept>
#include <string>

namespace mmtsp {

// Malformed or out-of-domain input (non-finite coordinates, bad speeds, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A structural invariant of a tour or solution does not hold.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Exact TSP requested on more targets than the Held-Karp table supports.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Insertion requested with no vehicle other than the excluded one.
struct NoCandidateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The exact oracle refuses instances outside its enumeration budget.
struct OracleUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mmtsp
