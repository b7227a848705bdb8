#pragma once

#include <stdexcept>
#include <string>

namespace qpval {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed structure: partitions that do not cover, non-refining filtrations, shape mismatches.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Mathematically valid input outside the operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Missing or invalid user-supplied data.
class InputError : public Error {
public:
    using Error::Error;
};

// Requested feature not available for this model or copula.
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Non-finite or otherwise broken floating-point result.
class NumericError : public Error {
public:
    using Error::Error;
};

// The financial market itself admits arbitrage (no equivalent martingale measure).
class MarketArbitrageError : public DomainError {
public:
    using DomainError::DomainError;
};

// A strategy is not adapted to the public filtration.
class AdaptednessError : public Error {
public:
    using Error::Error;
};

} // namespace qpval
