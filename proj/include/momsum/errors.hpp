#pragma once

#include <stdexcept>
#include <string>

namespace momsum {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A parameter or argument lies outside its admissible range.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Truncations, lengths or variable tags of the operands do not fit together.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

/// A numerical procedure could not reach its accuracy target.
class AccuracyError : public Error {
public:
    explicit AccuracyError(const std::string& what) : Error("accuracy", what) {}
};

/// The analytic continuation of a Borel transform meets a singularity on the
/// requested ray.
class SingularDirectionError : public Error {
public:
    explicit SingularDirectionError(const std::string& what)
        : Error("singular_direction", what) {}
};

/// A continuation failed the growth classification required for summation.
class SummabilityError : public Error {
public:
    explicit SummabilityError(const std::string& what) : Error("summability", what) {}
};

/// Input data carries no information (all zero, collinear regressors, ...).
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& what) : Error("degenerate_input", what) {}
};

/// Malformed configuration or interchange record.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

}  // namespace momsum
