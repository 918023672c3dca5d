#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracmateq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix required to be positive definite is not.
class DefinitenessError : public Error {
public:
    DefinitenessError(const std::string& what, double lambda_min)
        : Error(what + " (lambda_min = " + std::to_string(lambda_min) + ")"), lambda_min_(lambda_min) {}

    double lambda_min() const noexcept { return lambda_min_; }

private:
    double lambda_min_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what + " after " + std::to_string(iterations) + " iterations"), iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate)
        : Error(what + " (error estimate = " + std::to_string(estimate) + ")"), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// A matrix passed as a solution does not satisfy the equation closely enough.
class ConsistencyError : public Error {
public:
    ConsistencyError(const std::string& what, double residual)
        : Error(what + " (residual = " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Real-only operation called with complex data.
class FieldError : public Error {
public:
    using Error::Error;
};

/// Itemized problem-instance validation failure.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> items)
        : Error(join(items)), items_(std::move(items)) {}

    const std::vector<std::string>& items() const noexcept { return items_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid problem instance";
        for (const auto& item : items) out += "\n  - " + item;
        return out;
    }

    std::vector<std::string> items_;
};

/// Malformed input file or document.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace fracmateq
