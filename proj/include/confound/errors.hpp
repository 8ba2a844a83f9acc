#pragma once

#include <stdexcept>
#include <string>

namespace confound {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation precondition (overlapping sets, bad level, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Problems with the model itself: structure, tables, file syntax.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Numerical or probabilistic domain problems (positivity, bracketing, caps).
class MathError : public Error {
public:
    using Error::Error;
};

class CycleError : public ModelError {
public:
    using ModelError::ModelError;
};

class UnknownNode : public ModelError {
public:
    explicit UnknownNode(const std::string& name)
        : ModelError("unknown node '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnknownVariable : public ModelError {
public:
    explicit UnknownVariable(const std::string& what) : ModelError(what) {}
};

class ValidationError : public ModelError {
public:
    using ModelError::ModelError;
};

class StructureError : public ModelError {
public:
    using ModelError::ModelError;
};

class ParseError : public ModelError {
public:
    ParseError(std::string location, const std::string& reason)
        : ModelError(location + ": " + reason), location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class EmptyDataset : public ModelError {
public:
    using ModelError::ModelError;
};

class SizeCapExceeded : public MathError {
public:
    using MathError::MathError;
};

class ZeroProbabilityEvidence : public MathError {
public:
    using MathError::MathError;
};

class PositivityViolation : public MathError {
public:
    using MathError::MathError;
};

class InfeasibleEndpoints : public MathError {
public:
    using MathError::MathError;
};

class DegenerateEndpoints : public MathError {
public:
    using MathError::MathError;
};

class DomainError : public MathError {
public:
    using MathError::MathError;
};

}  // namespace confound
