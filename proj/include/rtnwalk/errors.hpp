#pragma once

#include <stdexcept>
#include <string>

namespace rtnwalk {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition: bad sizes, out-of-range indices, mismatched lengths.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// Numerical failure: the exponential action or a consistency check did not
/// reach the requested accuracy. Carries the best residual estimate reached.
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (achieved residual " + std::to_string(residual) + ")"),
          m_residual(residual)
    {}

    double residual() const noexcept { return m_residual; }

private:
    double m_residual;
};

} // namespace rtnwalk
