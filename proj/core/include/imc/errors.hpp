#pragma once

#include <stdexcept>
#include <string>

namespace imc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// Enumerating the vertices of a row (or the vertex chains of a model)
/// would exceed the configured cap.
class VertexExplosionError : public Error {
public:
    using Error::Error;
};

/// The depth-n history tree does not fit the memory/work budget.
class TreeTooLargeError : public Error {
public:
    using Error::Error;
};

/// A linear system that must be regular for valid inputs failed to solve.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Iteration hit max_iter before the finite states met the tolerance.
class NotConvergedError : public Error {
public:
    using Error::Error;
};

/// Policy iteration oscillated without improvement. Tie-break determinism
/// should make this unreachable; raising it signals a bug.
class PolicyCycleError : public Error {
public:
    using Error::Error;
};

class LambdaOutOfRangeError : public Error {
public:
    using Error::Error;
};

/// A claimed bound-attaining matrix failed re-verification by the precise
/// solver. Signals a bug, never expected on valid inputs.
class WitnessVerificationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Structural model violations, aggregated by validate_chain.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace imc
