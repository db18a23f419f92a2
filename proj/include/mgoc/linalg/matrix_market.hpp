#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "mgoc/linalg/sparse.hpp"

namespace mgoc::linalg {

enum class MmField { Real, Integer, Pattern };
enum class MmSymmetry { General, Symmetric };

/// Parsed `%%MatrixMarket matrix coordinate ...` file. Entries are kept as
/// stored (0-based, no symmetric expansion) so callers can decide how to
/// interpret symmetry.
struct MatrixMarketData {
    Index rows = 0;
    Index cols = 0;
    MmField field = MmField::Real;
    MmSymmetry symmetry = MmSymmetry::General;
    std::vector<Triplet> entries;
};

MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market(const std::filesystem::path& path);

/// Reads a `%%MatrixMarket matrix array real general` file into a row-major
/// dense block (used for vertex coordinate companion files).
std::vector<double> read_matrix_market_array(const std::filesystem::path& path, Index& rows,
                                             Index& cols);

/// Expands symmetric storage and returns a full SparseMatrix.
SparseMatrix to_sparse(const MatrixMarketData& data);

SparseMatrix load_sparse_matrix(const std::filesystem::path& path);
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path,
                         const std::string& comment = {});

}  // namespace mgoc::linalg
