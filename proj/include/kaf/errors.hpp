#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kaf {

enum class ErrorKind {
    validation,  // bad parameters or configuration
    dimension,   // incompatible vector/matrix sizes
    numerical,   // degenerate or non-finite arithmetic
    capacity,    // a configured size limit was hit
    io,
};

const char* to_string(ErrorKind kind);

// CLI exit code for an error kind: 1 validation, 2 numerical, 3 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string field = {})
        : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    // Offending configuration field, when there is one.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string field = {})
        : Error(ErrorKind::validation, message, std::move(field)) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& message) : Error(ErrorKind::dimension, message) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message) : Error(ErrorKind::numerical, message) {}
};

class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& message) : Error(ErrorKind::capacity, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

}  // namespace kaf
