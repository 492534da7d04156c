#pragma once

#include <stdexcept>
#include <string>

namespace qhd {

/// Base class for errors that stem from the mathematical input rather than from misuse of the tools.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularLatticeError : public DomainError {
public:
    SingularLatticeError() : DomainError("intersection lattice is singular") {}
};

class NotStarShapedError : public DomainError {
public:
    using DomainError::DomainError;
};

class LimitExceededError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Contraction refused because it would pass through a singular branch of an image curve.
class UnsupportedContractionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Internal consistency check failed; indicates a bug rather than bad input.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qhd
