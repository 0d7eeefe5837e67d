#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anscombe {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    Domain,       ///< argument outside the mathematical domain of an operation
    Input,        ///< malformed or inconsistent user input
    Bracket,      ///< root bracket without a sign change
    Convergence,  ///< iteration cap reached
    Singular,     ///< evaluation at a singular point
    Range,        ///< request outside the range covered by a solved object
    Resource,     ///< memory or size budget exceeded
    Io,           ///< file system failure
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Root-finding failure inside a backward solver, tagged with the grid step.
class SolverError : public Error {
public:
    SolverError(ErrorKind kind, std::size_t step, const std::string& message)
        : Error(kind, message), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace anscombe
