#pragma once

#include <stdexcept>
#include <string>

namespace sharplog {

/// Base class for every failure raised by the library. The CLI maps these to
/// exit code 3 unless a more specific mapping applies.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Integral or supremum that does not exist (non-integrable singularity,
/// unbounded profile).
class DivergenceError : public Error {
public:
    using Error::Error;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class DegenerateContact : public Error {
public:
    using Error::Error;
};

class InconsistentParameters : public Error {
public:
    using Error::Error;
};

class ScanFailure : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Iterative solver ran out of iterations or produced an indefinite step.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Quadrature too coarse to resolve the oscillation of a transform kernel.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// An explicit construction failed its own constraint checks.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Dyadic window does not capture the spectrum.
class WindowError : public Error {
public:
    using Error::Error;
};

} // namespace sharplog
