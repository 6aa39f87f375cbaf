#pragma once

#include <stdexcept>
#include <string>

namespace lpdec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed code file. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// An enumeration or table-size cap was exceeded.
class SizeError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A constituent code violates an assumption the decoder depends on.
class CodeError : public Error {
public:
    using Error::Error;
};

/// A caller supplied data inconsistent with the object it refers to.
class InputError : public Error {
public:
    using Error::Error;
};

class MergeError : public Error {
public:
    using Error::Error;
};

}  // namespace lpdec
