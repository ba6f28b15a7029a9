#pragma once

#include <stdexcept>
#include <string>

namespace appdo {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad symbol files, grammar errors, mismatched dimensions.
class InputError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition of an operation does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A coefficient function was evaluated at one of its poles.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An enumeration or grid exceeded its configured size cap.
class CapExceeded : public DomainError {
public:
    using DomainError::DomainError;
};

/// Expression syntax error; carries the byte offset into the source text.
class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : InputError(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

}  // namespace appdo
