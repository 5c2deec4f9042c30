#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace selffin {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Series that are supposed to share one time grid do not.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine produced a non-finite or singular result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulated path left the domain of the pricing grid.
class PathDomainError : public DomainError {
public:
    PathDomainError(std::size_t path_index, const std::string& what)
        : DomainError("path " + std::to_string(path_index) + ": " + what),
          path_index_(path_index) {}

    std::size_t path_index() const noexcept { return path_index_; }

private:
    std::size_t path_index_;
};

}  // namespace selffin
