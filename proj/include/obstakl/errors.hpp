#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace obstakl {

using Index = std::size_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or inconsistent data handed to a library routine.
class InputError : public Error {
public:
    using Error::Error;
};

/// Element-level failure while building an operator (degenerate cell, bad interval).
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual, std::size_t iterations)
        : Error(what + " (residual " + std::to_string(last_residual) + " after " +
                std::to_string(iterations) + " iterations)"),
          last_residual_(last_residual),
          iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    std::size_t iterations_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InputError(message);
}

}  // namespace detail
}  // namespace obstakl
