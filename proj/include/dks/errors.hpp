#pragma once

#include <stdexcept>
#include <string>

namespace dks {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model or violated operation precondition (inconsistent premise,
/// unknown token, non-state argument, wrong relation kind, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

/// An input structure does not satisfy the axioms it is required to satisfy
/// at load time (e.g. entailment incompatible with consistency).
class LoadError : public Error {
public:
    using Error::Error;
};

/// A guarantee the library relies on failed to hold. Always a bug.
class InvariantBreach : public Error {
public:
    using Error::Error;
};

} // namespace dks
