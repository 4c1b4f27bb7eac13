#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctlfrag {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position()` is a byte offset (formula text) or
/// a 1-based line number (file formats), as documented by the thrower.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Input lies outside the operator fragment an operation supports.
class FragmentError : public Error {
public:
    using Error::Error;
};

/// A size limit of an exhaustive procedure was exceeded.
class LimitError : public Error {
public:
    using Error::Error;
};

} // namespace ctlfrag
