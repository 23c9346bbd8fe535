#pragma once

#include <stdexcept>
#include <string>

namespace thermoion {

/// Input outside the mathematical domain of an operation (negative occupation,
/// nonpositive temperature, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The scalar separability bounds divide by d = n1^2 - 1/4 - |m1|^2; raised
/// when mode 1 is (numerically) pure and d vanishes.
class SingularConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A truncated representation (Fock cutoff, phonon-number cutoff k_max) is too
/// small for the requested accuracy.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency check failed; cannot happen for physical inputs.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Output file could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace thermoion
