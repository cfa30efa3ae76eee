#pragma once

#include <stdexcept>
#include <string>

namespace besov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Infeasible or out-of-scope parameters (exponents, ratio bounds, levels).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A grid fails one of the good-grid conditions.
class GridViolation : public Error {
public:
    GridViolation(std::string condition, std::string cell, const std::string& detail)
        : Error(condition + " violated at cell " + cell + ": " + detail),
          condition_(std::move(condition)),
          cell_(std::move(cell)) {}

    const std::string& condition() const noexcept { return condition_; }
    const std::string& cell() const noexcept { return cell_; }

private:
    std::string condition_;
    std::string cell_;
};

/// A transmutation rule expanded an atom with more mass than it declared.
class DecayViolation : public Error {
public:
    using Error::Error;
};

/// One of the norm-equivalence inequalities failed on a concrete input.
class ChainViolation : public Error {
public:
    using Error::Error;
};

}  // namespace besov
