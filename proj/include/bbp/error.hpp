#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input. pos is a byte offset into the parsed string.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at offset " + std::to_string(pos)), msg_(msg), pos_(pos) {}
    std::size_t pos() const { return pos_; }
    // Message without the offset suffix.
    const std::string& message() const { return msg_; }

private:
    std::string msg_;
    std::size_t pos_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Raised when a requested result cannot be certified at the given precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

}  // namespace bbp
