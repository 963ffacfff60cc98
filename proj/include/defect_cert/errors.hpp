#ifndef DEFECT_CERT_ERRORS_HPP
#define DEFECT_CERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcert {

/// Input outside the mathematical domain of an operation (x <= 0, NaN, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed call: bad sizes, composite moduli, n_max < d and similar.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact 128-bit arithmetic left its range. Callers may retry modulo a prime.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

class InsufficientDataError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Repeated nodes, singular Jacobians and other points off the identifiability locus.
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Noise level above the regime eps <= eps0 in which the quadratic bound holds.
class OutOfRegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

class BandViolationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Base signal is not in the nonnegative ambient class.
class AmbientClassError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace dcert

#endif  // DEFECT_CERT_ERRORS_HPP
