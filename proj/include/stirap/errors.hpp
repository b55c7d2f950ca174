#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

// Root of everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A configuration field is out of range or inconsistent.
struct ValidationError : Error {
    using Error::Error;
};

// Both driving fields vanish, so the mixing angle is undefined.
struct DegenerateField : Error {
    using Error::Error;
};

// The trapped component has decayed below the level where its log is meaningful.
struct DarkDepleted : Error {
    using Error::Error;
};

// The adaptive stepper shrank the step below the resolvable scale.
struct StepFailure : Error {
    using Error::Error;
};

// The adaptive quadrature ran out of its evaluation budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

// A closed-form result was requested outside the regime where it holds.
struct PreconditionViolated : Error {
    using Error::Error;
};

// Not enough usable points to run a fit.
struct InsufficientData : Error {
    using Error::Error;
};

}  // namespace stirap
