#pragma once

#include <stdexcept>
#include <string>

namespace hc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

class NoClosedForm : public Error {
public:
    using Error::Error;
};

class BracketFailure : public Error {
public:
    BracketFailure(const std::string& what, double largest)
        : Error(what + " (largest bracket tried: " + std::to_string(largest) + ")"),
          largest_bracket(largest) {}
    double largest_bracket;
};

} // namespace hc
