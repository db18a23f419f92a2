#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mgoc {

/// Raised when a factorization meets a non-positive pivot or a singular
/// structure. `pivot` is the row/column index in the caller's ordering, or
/// -1 when unknown.
class FactorizationError : public std::runtime_error {
public:
    FactorizationError(const std::string& what, std::ptrdiff_t pivot)
        : std::runtime_error(what), pivot_(pivot) {}

    std::ptrdiff_t pivot() const { return pivot_; }

private:
    std::ptrdiff_t pivot_;
};

/// Malformed input file (MatrixMarket, graph JSON).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mgoc
