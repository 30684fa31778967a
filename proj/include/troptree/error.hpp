#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace troptree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different ambient spaces (leaf counts or permutation sizes differ).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A value violates the invariants of its type (bad clade family, negative edge, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input vector is not an ultrametric where one is required.
class NotUltrametric : public Error {
public:
    using Error::Error;
};

/// Requested size exceeds a combinatorial search bound.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace troptree
