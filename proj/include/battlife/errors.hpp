#pragma once

#include <stdexcept>
#include <string>

namespace battlife {

/// Bad input: rejected parameter, malformed file, violated window invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A checked integer operation left the 64-bit signed range.
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric result that cannot be represented or used (non-finite fit, zero slope).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace battlife
