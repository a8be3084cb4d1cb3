#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covariance factorization met a non-positive pivot.
class NonPositiveDefinite : public Error {
public:
    NonPositiveDefinite(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}

    /// 1-based position of the offending pivot.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A Gaussian approximation was requested with a variance that is not > 0.
class NegativeVariance : public Error {
public:
    NegativeVariance(const std::string& what, double variance)
        : Error(what), variance_(variance) {}

    double variance() const noexcept { return variance_; }

private:
    double variance_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Parameters or run configuration rejected by validation.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace onebit
