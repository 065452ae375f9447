#pragma once

#include <stdexcept>
#include <string>

namespace gplab {

// Requested region extends past what a prime table covers.
class coverage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Memory-budget or similar resource limits exceeded.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Prime-table cache file unreadable, truncated, or wrong version.
class cache_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Working precision no longer suffices for the requested depth.
class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured work budget.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gplab
