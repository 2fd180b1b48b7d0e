#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pkrylov {

/// Operand dimensions do not agree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on an argument was violated.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An API was driven in the wrong order, e.g. recording into a closed trace.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed input text. Carries the 1-based line number where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An index read from input lies outside the declared bounds.
class RangeError : public std::out_of_range {
public:
    RangeError(const std::string& what, std::size_t line)
        : std::out_of_range(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Filesystem failure; the message always names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which divisor of a Krylov recurrence vanished.
enum class BreakdownKind {
    p_ap,              // <p, Ap> in CG
    ap_r0star,         // <Ap, r0*> in BiCGStab
    as_as,             // <As, As> in BiCGStab
    omega,             // omega = 0 in classical BiCGStab
    r_r0star,          // <r, r0*> in BiCGStab
    singular_triangular,
    nonfinite,
};

const char* to_string(BreakdownKind kind) noexcept;

/// A recurrence divisor fell below the breakdown tolerance.
class BreakdownError : public std::runtime_error {
public:
    explicit BreakdownError(BreakdownKind kind)
        : std::runtime_error(std::string("breakdown: ") + to_string(kind)), kind_(kind) {}

    BreakdownKind kind() const noexcept { return kind_; }

private:
    BreakdownKind kind_;
};

}  // namespace pkrylov
