#pragma once

#include <memory>
#include <span>

#include "mgoc/linalg/sparse.hpp"

namespace mgoc::linalg {

enum class FactorKind { Cholesky, LU };

/// Complete sparse factorization with a fill-reducing ordering, computed once
/// and reused for any number of solves.
///
/// Cholesky uses an approximate-minimum-degree ordering and an LDL^T
/// factorization whose pivots are all required to be strictly positive; a
/// non-positive pivot raises FactorizationError naming the offending row of
/// the input matrix. LU uses a column approximate-minimum-degree ordering with
/// partial pivoting.
class Factorization {
public:
    Factorization(const SparseMatrix& a, FactorKind kind);
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;

    FactorKind kind() const { return kind_; }
    Index size() const { return n_; }

    Vector solve(std::span<const double> b) const;
    void solve_in_place(std::span<double> x) const;

private:
    struct Impl;
    FactorKind kind_;
    Index n_;
    std::unique_ptr<Impl> impl_;
};

inline Factorization factor(const SparseMatrix& a, FactorKind kind) { return {a, kind}; }
inline Vector solve(const Factorization& f, std::span<const double> b) { return f.solve(b); }

}  // namespace mgoc::linalg
