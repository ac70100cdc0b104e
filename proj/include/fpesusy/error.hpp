#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace fpesusy {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside a field's domain, or combination of disjoint domains.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite result (e.g. exp overflow) at a specific point.
class RangeError : public Error {
public:
    RangeError(const std::string& what, double x, double t)
        : Error(format(what, x, t)), x_(x), t_(t) {}

    double x() const noexcept { return x_; }
    double t() const noexcept { return t_; }

private:
    static std::string format(const std::string& what, double x, double t) {
        std::ostringstream os;
        os.precision(17);
        os << what << " at (x=" << x << ", t=" << t << ")";
        return os.str();
    }

    double x_;
    double t_;
};

/// A jet entry was requested that the field does not carry.
class JetDepthError : public Error {
public:
    using Error::Error;
};

/// Darboux seed evaluated to a non-positive value.
class ZeroCrossingError : public Error {
public:
    using Error::Error;
};

/// Hierarchy step refused: index out of range or condition (W0) violated.
class HierarchyError : public Error {
public:
    using Error::Error;
};

/// Failure inside a numerical oracle (tridiagonal solve, quadrature, series truncation).
class NumericsError : public Error {
public:
    using Error::Error;
};

/// A supplied construction failed its verification gate.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace fpesusy
