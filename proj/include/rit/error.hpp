#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rit {

enum class ErrorKind {
    InvalidModulus,
    InvalidPrime,
    InvalidInput,
    NoSolution,
    NotAResidue,
    WrongResidueClass,
    TooLarge,
    SyntaxError,
    CycleDetected,
    UnboundVariable,
    DuplicateId,
    InvalidRadical,
    DigitCapExceeded,
    ExponentNotRepresentable,
    ShapeError,
    MissingRoot,
    DuplicateRadicand,
    NonPrimeRadicand,
    EmptyProgression,
    LimitTooLarge,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `line()` is nonzero only for
/// errors that originate in the circuit text parser.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail, std::size_t line = 0);

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::size_t line_;
    std::string detail_;
};

}  // namespace rit
