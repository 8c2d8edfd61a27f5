#ifndef AUTOLOCK_ERROR_HPP
#define AUTOLOCK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace autolock {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax or semantic error while reading a .bench file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Netlist or genotype invariant violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling ran out of retries (circuit too small or K too large).
class ExhaustionError : public Error {
public:
    using Error::Error;
};

}  // namespace autolock

#endif
