#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cleandec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input, dimension mismatch.
class InputError : public Error {
public:
    using Error::Error;
};

/// Input file could not be parsed; carries the 1-based line number.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iteration failed or a computed certificate could not be confirmed.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A singular value lies within tolerance of a requested spectral cut.
class AmbiguousCut : public NumericalFailure {
public:
    AmbiguousCut(const std::string& what, double cut) : NumericalFailure(what), cut_(cut) {}

    double cut() const noexcept { return cut_; }

private:
    double cut_;
};

/// A compression eigenvalue lies within tolerance of a Halmos splitting threshold.
class AmbiguousSplit : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

}  // namespace cleandec
