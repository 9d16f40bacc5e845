#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace sigdev {

/// Input outside an operation's domain (bad interval, dimension mismatch, malformed word).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure broke down (e.g. a covariance that is not positive definite).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size or accuracy budget cannot be met.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Short %g rendering of a number for error messages.
inline std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

}  // namespace sigdev
