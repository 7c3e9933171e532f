#ifndef QDISTIL_ERRORS_HPP
#define QDISTIL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdistil {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mismatched vector lengths or moduli.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A documented precondition was violated (non-stabilizer generators,
// unnormalized weights, vector outside the dual space, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// The request exceeds the exact-enumeration capacity limits.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Malformed textual or JSON input.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace qdistil

#endif
