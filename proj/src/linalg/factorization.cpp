#include "mgoc/linalg/factorization.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgoc/error.hpp"

namespace mgoc::linalg {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double, int>> t;
    t.reserve(static_cast<std::size_t>(a.nnz()));
    for (const auto& e : a.triplets())
        t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
    EigenSparse m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

}  // namespace

struct Factorization::Impl {
    Eigen::SimplicialLDLT<EigenSparse, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SparseMatrix& a, FactorKind kind)
    : kind_(kind), n_(a.rows()), impl_(std::make_unique<Impl>()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("factor: matrix is not square");
    if (n_ == 0) return;
    const EigenSparse m = to_eigen(a);

    if (kind == FactorKind::Cholesky) {
        auto& f = impl_->ldlt;
        f.compute(m);
        if (f.info() != Eigen::Success)
            throw FactorizationError("Cholesky: factorization failed (zero pivot)", -1);
        const auto d = f.vectorD();
        const auto& perm = f.permutationP();
        for (int i = 0; i < d.size(); ++i) {
            if (!(d[i] > 0.0)) {
                // permutationP maps original -> permuted; invert to report the input row.
                int original = i;
                for (int k = 0; k < perm.size(); ++k)
                    if (perm.indices()[k] == i) original = k;
                throw FactorizationError("Cholesky: non-positive pivot " + std::to_string(d[i]) +
                                             " at row " + std::to_string(original),
                                         original);
            }
        }
    } else {
        auto& f = impl_->lu;
        f.analyzePattern(m);
        f.factorize(m);
        if (f.info() != Eigen::Success)
            throw FactorizationError("LU: matrix is singular: " + f.lastErrorMessage(), -1);
    }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Vector Factorization::solve(std::span<const double> b) const {
    Vector x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

void Factorization::solve_in_place(std::span<double> x) const {
    if (static_cast<Index>(x.size()) != n_) throw std::invalid_argument("solve: size mismatch");
    if (n_ == 0) return;
    Eigen::Map<Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    if (kind_ == FactorKind::Cholesky) {
        Eigen::VectorXd r = impl_->ldlt.solve(v);
        v = r;
    } else {
        Eigen::VectorXd r = impl_->lu.solve(v);
        v = r;
    }
}

}  // namespace mgoc::linalg
