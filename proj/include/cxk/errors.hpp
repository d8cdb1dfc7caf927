#pragma once

#include <stdexcept>
#include <string>

namespace cxk {

// Root of every error the toolkit throws. The CLI maps the subclasses onto
// exit codes (see tools/cxk.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration / input problems (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// A documented precondition of an operation does not hold for the inputs.
class PreconditionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Numerical failures during a run (exit code 3).
class SimulationError : public Error {
public:
    using Error::Error;
};

class DegenerateMagnitudeError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class UnwrapAmbiguityError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class NonFiniteStateError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class ConvergenceError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class OverflowError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

// A run finished but violated one of its declared assertions (exit code 4).
class AcceptanceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cxk
