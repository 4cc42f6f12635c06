#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlp {

enum class ErrorKind {
    invalid_argument,
    kernel_window,
    regularization_failure,
    contraction_failure,
    stability_failure,
    numeric_failure,
    construction_failure,
    ladder_failure,
    internal_error,
    domain_error,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for every failure raised by the library. The kind is the
/// machine-readable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when the Picard iteration stops contracting. Carries the full
/// history so callers can tell a too-long horizon from a slow start.
class ContractionFailure : public Error {
public:
    ContractionFailure(const std::string& message,
                       std::vector<double> sup_diffs,
                       std::vector<double> ratios)
        : Error(ErrorKind::contraction_failure, message),
          sup_diffs_(std::move(sup_diffs)),
          ratios_(std::move(ratios)) {}

    const std::vector<double>& sup_diffs() const noexcept { return sup_diffs_; }
    const std::vector<double>& ratios() const noexcept { return ratios_; }

private:
    std::vector<double> sup_diffs_;
    std::vector<double> ratios_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw Error(ErrorKind::invalid_argument, message);
    }
}

}  // namespace nlp
