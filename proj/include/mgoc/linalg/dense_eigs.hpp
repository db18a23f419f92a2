#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mgoc/linalg/sparse.hpp"

namespace mgoc::linalg {

inline constexpr Index kDefaultEigCap = 2000;

/// Eigenvalues of a general real n x n matrix given in row-major order.
/// Sorted by (real, imag). Throws std::length_error when n exceeds `cap`.
std::vector<std::complex<double>> dense_eigs(std::span<const double> row_major, Index n,
                                             Index cap = kDefaultEigCap);

/// Eigenvalues of a symmetric matrix (real, ascending).
std::vector<double> dense_symmetric_eigs(std::span<const double> row_major, Index n,
                                         Index cap = kDefaultEigCap);

}  // namespace mgoc::linalg
