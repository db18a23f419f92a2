#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mgoc::linalg {

using Index = std::ptrdiff_t;
using Vector = std::vector<double>;

struct Triplet {
    Index row;
    Index col;
    double value;
};

/// Compressed sparse row matrix.
///
/// Column indices are sorted and unique within each row. Explicit zeros may
/// be stored (they are produced by exact cancellation in `add`), but the
/// builders never introduce them on their own.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(Index rows, Index cols);

    /// Duplicate (row, col) entries are summed.
    static SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries);
    static SparseMatrix identity(Index n);
    static SparseMatrix diagonal(std::span<const double> d);
    static SparseMatrix from_dense(Index rows, Index cols, std::span<const double> row_major,
                                   double drop_tol = 0.0);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }

    std::span<const Index> row_ptr() const { return row_ptr_; }
    std::span<const Index> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Entry lookup by binary search; 0 when not stored.
    double coeff(Index r, Index c) const;

    /// Submatrix [r0, r1) x [c0, c1).
    SparseMatrix block(Index r0, Index r1, Index c0, Index c1) const;

    std::vector<Triplet> triplets() const;

    /// Row-major dense copy.
    std::vector<double> to_dense() const;

    /// Entrywise absolute value.
    SparseMatrix abs() const;
    SparseMatrix scaled(double s) const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<double> values_;

    friend SparseMatrix transpose(const SparseMatrix& a);
    friend SparseMatrix sp_add(const SparseMatrix& a, const SparseMatrix& b, double alpha,
                               double beta);
    friend SparseMatrix sp_mul(const SparseMatrix& a, const SparseMatrix& b);
};

/// y = A x
Vector spmv(const SparseMatrix& a, std::span<const double> x);
/// y += alpha * A x
void spmv_add(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
              double alpha = 1.0);
/// y = A^T x without forming the transpose.
Vector spmv_transposed(const SparseMatrix& a, std::span<const double> x);

/// alpha * A + beta * B
SparseMatrix sp_add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                    double beta = 1.0);
SparseMatrix sp_mul(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix transpose(const SparseMatrix& a);

Vector diag(const SparseMatrix& a);
/// Row sums, i.e. the lumped diagonal.
Vector row_lump(const SparseMatrix& a);

/// Largest |A_ij - B_ij| over the union of both patterns.
double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b);
double max_abs(const SparseMatrix& a);

// Small dense-vector helpers used throughout the solvers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace mgoc::linalg
