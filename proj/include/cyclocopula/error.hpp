#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclocopula {

/// Base of all library errors. The CLI maps the three subclasses onto its
/// exit codes (1 usage, 2 data, 3 numerical).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments supplied by the caller (invalid parameters, bad flags).
class UsageError : public Error {
public:
    using Error::Error;
};

/// The data cannot support the requested computation.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure broke down.
class NumericalError : public Error {
public:
    using Error::Error;
};

class FactorizationError : public NumericalError {
public:
    FactorizationError(std::size_t pivot_index, double pivot)
        : NumericalError("cholesky factorization failed at pivot " + std::to_string(pivot_index) +
                         " (value " + std::to_string(pivot) + ")"),
          pivot_index_(pivot_index) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

} // namespace cyclocopula
