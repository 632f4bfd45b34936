#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

// Parse failure; position is the 0-based character offset into the source.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Evaluation left the natural domain (log of a nonpositive value, division
// by zero, ...). Carries the offending subexpression as text.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& message, std::string subexpression)
        : std::runtime_error(message + " in '" + subexpression + "'"),
          subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

// An orbit left the admissible domain; step/point identify the failure.
class EscapeError : public std::runtime_error {
public:
    EscapeError(const std::string& message, int step, double point)
        : std::runtime_error(message), step_(step), point_(point) {}
    int step() const noexcept { return step_; }
    double point() const noexcept { return point_; }

private:
    int step_;
    double point_;
};

// Violated call contract: mismatched jets, bad indices, missing bracket.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iteration or quadrature failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ergolab
