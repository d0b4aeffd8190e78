#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfg {

enum class ErrorKind {
    Shape,
    GridMismatch,
    Range,
    SingularMatrix,
    IterativeFailure,
    NewtonFailure,
    DegenerateCost,
    UnsupportedDimension,
    Catalog,
    Config,
    Io,
};

/// Base class for every error raised by the library. The kind is stable and
/// is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t pivot, const std::string& what)
        : Error(ErrorKind::SingularMatrix, what), pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class IterativeFailure : public Error {
public:
    IterativeFailure(double residual, const std::string& what)
        : Error(ErrorKind::IterativeFailure, what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NewtonFailure : public Error {
public:
    NewtonFailure(double residual, int time_index, const std::string& what)
        : Error(ErrorKind::NewtonFailure, what), residual_(residual), time_index_(time_index) {}
    double residual() const noexcept { return residual_; }
    /// Time slice at which the backward sweep failed, -1 when unknown.
    int time_index() const noexcept { return time_index_; }

private:
    double residual_;
    int time_index_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(ErrorKind::Config, path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace mfg
