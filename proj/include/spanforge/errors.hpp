#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spanforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative decomposition failed to converge.
class SolverFailure : public Error {
public:
    SolverFailure(std::size_t rows, std::size_t cols)
        : Error("SVD failed to converge on a " + std::to_string(rows) + "x" +
                std::to_string(cols) + " matrix"),
          rows_(rows), cols_(cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
};

class Inconsistent : public Error {
public:
    using Error::Error;
};

class ZeroConstraint : public Error {
public:
    using Error::Error;
};

class NoPositiveWitness : public Error {
public:
    using Error::Error;
};

class NoNegativeWitness : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Input that violates a documented schema or precondition. `field()` names
/// the offending part of the input.
class MalformedInput : public Error {
public:
    MalformedInput(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace spanforge
