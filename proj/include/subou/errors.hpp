#pragma once

#include <stdexcept>
#include <string>

namespace subou {

// Base of every error raised by the library. Each subclass names one failure
// class so callers (and the CLI) can map it to a machine-readable kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "domain"; }
};

class UnsupportedFamilyError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "unsupported_family"; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved, int order)
        : Error(what), achieved_(achieved), order_(order) {}
    [[nodiscard]] const char* kind() const noexcept override { return "convergence"; }
    // Error estimate reached at the truncation order where evaluation stopped.
    [[nodiscard]] double achieved() const noexcept { return achieved_; }
    [[nodiscard]] int order() const noexcept { return order_; }

private:
    double achieved_;
    int order_;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    [[nodiscard]] const char* kind() const noexcept override { return "quadrature"; }
    [[nodiscard]] double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Requested maturity is below the shortest expiry for which double-precision
// series summation is supported.
class PrecisionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "precision"; }
};

class BracketingError : public Error {
public:
    BracketingError(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}
    [[nodiscard]] const char* kind() const noexcept override { return "bracketing"; }
    [[nodiscard]] double range_lo() const noexcept { return lo_; }
    [[nodiscard]] double range_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

class OverflowError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "overflow"; }
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0, int column = 0)
        : Error(what), line_(line), column_(column) {}
    [[nodiscard]] const char* kind() const noexcept override { return "config"; }
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace subou
