#pragma once

#include <stdexcept>
#include <string>

namespace tmi {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// UsageError -> 2, everything else -> 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file (bad syntax, truncated binary, ragged CSV row).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally valid input that violates a domain invariant (non-finite
// feature, label out of range, non-stochastic prediction row).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A computation that cannot proceed on the given data (degenerate point set,
// no scorable class, undefined correlation).
class ComputeError : public Error {
public:
    using Error::Error;
};

// Misuse of the command-line surface (missing flag, unknown method name).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace tmi
