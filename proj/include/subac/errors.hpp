#pragma once

#include <stdexcept>
#include <string>

namespace subac {

// Exit codes used by the command line front end. Every exception type below
// maps to exactly one of them.
enum class ExitCode : int {
    ok = 0,
    parse = 1,
    precondition = 2,
    resource = 3,
    internal = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual ExitCode exit_code() const noexcept = 0;
};

// Malformed input text: unknown letters, duplicate rules, bad syntax.
class ParseError final : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::parse; }
};

// Valid input that the requested analysis does not accept (non-primitive,
// non-constant length, too few usable points for a fit, ...).
class PreconditionError final : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::precondition; }
};

// A statistical fit without enough usable data. Reported like a failed
// precondition.
class EstimationError final : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::precondition; }
};

// A configured size budget would be exceeded.
class ResourceError final : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::resource; }
};

// An invariant that holds mathematically was observed to fail. Always a bug.
class InternalError final : public Error {
public:
    using Error::Error;
    [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::internal; }
};

namespace detail {

inline void ensure(bool condition, const std::string& what) {
    if (!condition) throw InternalError(what);
}

} // namespace detail
} // namespace subac
