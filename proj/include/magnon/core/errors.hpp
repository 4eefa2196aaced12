#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace magnon {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input: bad spec text, out-of-range parameters, violated preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

// A configured desk-scale limit was hit.
class CapExceeded : public Error {
public:
    CapExceeded(std::string module, const std::string& what)
        : Error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SpecSyntaxError : public InputError {
public:
    SpecSyntaxError(std::size_t position, const std::string& what)
        : InputError("syntax error at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class BrillouinRangeError : public InputError {
public:
    using InputError::InputError;
};

class SectorRangeError : public InputError {
public:
    using InputError::InputError;
};

class InvalidModulus : public InputError {
public:
    using InputError::InputError;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

class OddSizeError : public InputError {
public:
    using InputError::InputError;
};

class DivisibilityError : public InputError {
public:
    using InputError::InputError;
};

class InsufficientData : public InputError {
public:
    using InputError::InputError;
};

class DegenerateAbscissa : public InputError {
public:
    using InputError::InputError;
};

class NonpositiveValue : public InputError {
public:
    using InputError::InputError;
};

class VanishingResult : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NormalizationViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TraceDeviation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace magnon
