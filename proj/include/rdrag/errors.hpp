#pragma once

#include <stdexcept>
#include <string>

namespace rdrag {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumericResolution = 3,
    kIo = 4,
};

/// Base class for every error raised by the library. `code()` is a short
/// machine-readable token such as "undefined_notch".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail, ExitCode exit_code)
        : std::runtime_error(detail), code_(std::move(code)), exit_code_(exit_code) {}

    const std::string& code() const noexcept { return code_; }
    ExitCode exit_code() const noexcept { return exit_code_; }

private:
    std::string code_;
    ExitCode exit_code_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& detail)
        : Error("invalid_" + field, field + ": " + detail, ExitCode::kValidation) {}
};

// DRAG with a zero notch frequency.
class UndefinedNotchError : public Error {
public:
    explicit UndefinedNotchError(const std::string& detail)
        : Error("undefined_notch", detail, ExitCode::kValidation) {}
};

class GridMismatchError : public Error {
public:
    explicit GridMismatchError(const std::string& detail)
        : Error("grid_mismatch", detail, ExitCode::kValidation) {}
};

class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& detail)
        : Error("resolution", detail, ExitCode::kNumericResolution) {}
};

class FitError : public Error {
public:
    explicit FitError(const std::string& detail)
        : Error("fit_failure", detail, ExitCode::kNumericResolution) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& detail)
        : Error("domain", detail, ExitCode::kValidation) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& detail) : Error("io", detail, ExitCode::kIo) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& detail)
        : Error("config", detail, ExitCode::kValidation) {}
};

}  // namespace rdrag
