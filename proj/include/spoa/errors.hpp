#pragma once

#include <stdexcept>
#include <string>

namespace spoa {

/// Caller-supplied input violated a precondition or file-format invariant.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A brute-force or construction guard refused an instance that is too large.
struct SizeGuardError : std::runtime_error {
    explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed. Indicates a bug, not a usage error.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace spoa
