#pragma once

#include <stdexcept>
#include <string>

namespace banachlab {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates a documented precondition (CLI exit code 2).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// A numerically constructed object failed its post-checks (CLI exit code 3).
class ConditioningError : public Error {
public:
    explicit ConditioningError(const std::string& msg) : Error(msg) {}
};

// A budgeted search ran out of candidates (CLI exit code 3).
class SearchExhaustedError : public Error {
public:
    explicit SearchExhaustedError(const std::string& msg) : Error(msg) {}
};

} // namespace banachlab
