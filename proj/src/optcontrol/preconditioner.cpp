#include "mgoc/optcontrol/preconditioner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "mgoc/error.hpp"

namespace mgoc::optcontrol {

using linalg::Factorization;
using linalg::FactorKind;

PreconKind parse_precon_kind(std::string_view name) {
    if (name == "none" || name == "identity") return PreconKind::None;
    if (name == "ideal") return PreconKind::Ideal;
    if (name == "sym" || name == "matched_symmetric") return PreconKind::MatchedSymmetric;
    if (name == "nonsym" || name == "matched_nonsymmetric") return PreconKind::MatchedNonsymmetric;
    throw std::invalid_argument("unknown preconditioner '" + std::string(name) +
                                "' (expected none, ideal, sym or nonsym)");
}

std::string_view to_string(PreconKind kind) {
    switch (kind) {
        case PreconKind::None: return "none";
        case PreconKind::Ideal: return "ideal";
        case PreconKind::MatchedSymmetric: return "sym";
        case PreconKind::MatchedNonsymmetric: return "nonsym";
    }
    return "?";
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

SparseMatrix beta_shift(Index offset, Index n, double beta) {
    Vector d(static_cast<std::size_t>(n), 0.0);
    for (Index i = offset; i < n; ++i) d[i] = beta;
    return SparseMatrix::diagonal(d);
}

// M_DD + bI - M_DF diag(d)^{-1} M_FD
SparseMatrix diagonal_mass_schur(const KktSystem& kkt, std::span<const double> d_m) {
    const auto& mb = kkt.operators().Mb;
    Vector inv(d_m.size());
    for (std::size_t i = 0; i < d_m.size(); ++i) inv[i] = 1.0 / d_m[i];
    const SparseMatrix corr = sp_mul(mb.DF, sp_mul(SparseMatrix::diagonal(inv), mb.FD));
    const SparseMatrix shifted = sp_add(mb.DD, SparseMatrix::identity(kkt.n_control()), 1.0, kkt.beta());
    return sp_add(shifted, corr, 1.0, -1.0);
}

SparseMatrix dense_inverse(const Factorization& f, Index n) {
    std::vector<double> inv(static_cast<std::size_t>(n * n));
    Vector e(static_cast<std::size_t>(n), 0.0);
    for (Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = f.solve(e);
        e[j] = 0.0;
        for (Index i = 0; i < n; ++i) inv[i * n + j] = col[i];
    }
    return SparseMatrix::from_dense(n, n, inv);
}

void check_cap(Index n, Index cap, const char* what) {
    if (n > cap)
        throw std::length_error(std::string(what) + ": size " + std::to_string(n) +
                                " exceeds cap " + std::to_string(cap));
}

}  // namespace

struct Preconditioner::Impl {
    std::optional<Factorization> mass;   // ideal: Mblk
    Eigen::LLT<Eigen::MatrixXd> schur;   // ideal: dense S
    std::optional<Factorization> d_sm;   // matched: D_SM
    std::optional<Factorization> outer;  // sym: K_FF+N; nonsym: K_FF+M_FF
    std::optional<Factorization> inner;  // nonsym: K_FF^T+N2
    SparseMatrix m_ff;                   // nonsym middle factor
};

SparseMatrix mass_block(const KktSystem& kkt) {
    const auto& ops = kkt.operators();
    const Index nf = kkt.n_free();
    const Index n = nf + kkt.n_control();
    return sp_add(ops.M, beta_shift(nf, n, kkt.beta()));
}

Preconditioner::Preconditioner(PreconKind kind, const KktSystem& kkt)
    : kind_(kind), nf_(kkt.n_free()), nd_(kkt.n_control()), impl_(std::make_unique<Impl>()) {
    if (kind == PreconKind::None) return;
    if (nd_ < 1) throw std::invalid_argument("build_preconditioner: no Dirichlet vertices");
    const auto& ops = kkt.operators();
    const auto& mb = ops.Mb;
    const auto& kb = ops.Kb;

    if (kind == PreconKind::Ideal) {
        check_cap(nf_, kIdealCap, "ideal preconditioner");
        const SparseMatrix mblk = mass_block(kkt);
        impl_->mass.emplace(mblk, FactorKind::Cholesky);
        const SparseMatrix kr = ops.K.block(0, nf_, 0, nf_ + nd_);
        const SparseMatrix krt = transpose(kr);
        Eigen::MatrixXd s(nf_, nf_);
        Vector e(static_cast<std::size_t>(nf_), 0.0);
        for (Index j = 0; j < nf_; ++j) {
            e[j] = 1.0;
            Vector z = linalg::spmv(krt, e);
            e[j] = 0.0;
            impl_->mass->solve_in_place(z);
            const Vector col = linalg::spmv(kr, z);
            for (Index i = 0; i < nf_; ++i) s(i, j) = col[i];
        }
        impl_->schur.compute(s);
        if (impl_->schur.info() != Eigen::Success)
            throw std::domain_error("ideal preconditioner: Schur complement not SPD");
        return;
    }

    d_m_ = linalg::diag(mb.FF);
    d_sm_ = diagonal_mass_schur(kkt, d_m_);
    for (Index k = 0; k < nd_; ++k)
        if (!(d_sm_.coeff(k, k) > 0.0))
            throw std::domain_error("D_SM has a nonpositive diagonal entry at control " +
                                    std::to_string(k));
    try {
        impl_->d_sm.emplace(d_sm_, FactorKind::Cholesky);
    } catch (const FactorizationError& e) {
        throw std::domain_error(std::string("D_SM not SPD: ") + e.what());
    }

    kdk_ = sp_mul(kb.FD, sp_mul(dense_inverse(*impl_->d_sm, nd_), kb.DF));
    d_kdk_ = linalg::row_lump(kdk_);
    double scale = 0.0;
    for (double v : d_kdk_) scale = std::max(scale, std::abs(v));
    for (Index i = 0; i < nf_; ++i) {
        double& v = d_kdk_[i];
        if (v < -1e-12 * scale)
            throw std::domain_error("D_KDK has a negative entry at free DOF " + std::to_string(i));
        v = std::max(v, 0.0);
    }
    n_.resize(static_cast<std::size_t>(nf_));
    for (Index i = 0; i < nf_; ++i) n_[i] = std::sqrt(d_kdk_[i]) * std::sqrt(d_m_[i]);

    if (kind == PreconKind::MatchedSymmetric) {
        try {
            impl_->outer.emplace(sp_add(kb.FF, SparseMatrix::diagonal(n_)), FactorKind::Cholesky);
        } catch (const FactorizationError&) {
            throw std::domain_error("matched Schur block not SPD");
        }
    } else {
        impl_->outer.emplace(sp_add(kb.FF, mb.FF), FactorKind::LU);
        impl_->inner.emplace(sp_add(transpose(kb.FF), kdk_), FactorKind::LU);
        impl_->m_ff = mb.FF;
    }
}

Preconditioner::~Preconditioner() = default;
Preconditioner::Preconditioner(Preconditioner&&) noexcept = default;
Preconditioner& Preconditioner::operator=(Preconditioner&&) noexcept = default;

void Preconditioner::apply(std::span<const double> x, std::span<double> y) const {
    const auto n = static_cast<std::size_t>(size());
    if (x.size() != n || y.size() != n)
        throw std::invalid_argument("Preconditioner::apply: size mismatch");
    std::copy(x.begin(), x.end(), y.begin());
    if (kind_ == PreconKind::None) return;

    const auto nf = static_cast<std::size_t>(nf_);
    const auto nd = static_cast<std::size_t>(nd_);
    auto y3 = y.subspan(nf + nd, nf);

    if (kind_ == PreconKind::Ideal) {
        impl_->mass->solve_in_place(y.first(nf + nd));
        Eigen::Map<Eigen::VectorXd> v(y3.data(), nf_);
        v = impl_->schur.solve(Eigen::VectorXd(v));
        return;
    }

    for (std::size_t i = 0; i < nf; ++i) y[i] /= d_m_[i];
    impl_->d_sm->solve_in_place(y.subspan(nf, nd));

    if (kind_ == PreconKind::MatchedSymmetric) {
        // (K+N)^{-T} D_M (K+N)^{-1}, K+N symmetric.
        impl_->outer->solve_in_place(y3);
        for (std::size_t i = 0; i < nf; ++i) y3[i] *= d_m_[i];
        impl_->outer->solve_in_place(y3);
    } else {
        impl_->outer->solve_in_place(y3);
        const Vector t = linalg::spmv(impl_->m_ff, y3);
        std::copy(t.begin(), t.end(), y3.begin());
        impl_->inner->solve_in_place(y3);
    }
}

Vector Preconditioner::apply(std::span<const double> x) const {
    Vector y(x.size());
    apply(x, y);
    return y;
}

Preconditioner build_preconditioner(PreconKind kind, const KktSystem& kkt) { return {kind, kkt}; }

std::vector<double> exact_mass_schur(const KktSystem& kkt) {
    const auto& mb = kkt.operators().Mb;
    const Index nd = kkt.n_control();
    const Factorization mff(mb.FF, FactorKind::Cholesky);
    std::vector<double> s = mb.DD.to_dense();
    Vector e(static_cast<std::size_t>(nd), 0.0);
    for (Index j = 0; j < nd; ++j) {
        e[j] = 1.0;
        Vector z = linalg::spmv(mb.FD, e);
        e[j] = 0.0;
        mff.solve_in_place(z);
        const Vector col = linalg::spmv(mb.DF, z);
        for (Index i = 0; i < nd; ++i) s[i * nd + j] -= col[i];
        s[j * nd + j] += kkt.beta();
    }
    return s;
}

std::vector<double> preconditioned_mass_block(const KktSystem& kkt, bool diagonal, Index cap) {
    const Index nf = kkt.n_free();
    const Index nd = kkt.n_control();
    const Index n = nf + nd;
    check_cap(n, cap, "preconditioned_mass_block");
    const auto& mb = kkt.operators().Mb;
    RowMatrix a = Eigen::Map<const RowMatrix>(mass_block(kkt).to_dense().data(), n, n);

    if (diagonal) {
        const Vector d_m = linalg::diag(mb.FF);
        const Factorization d_sm(diagonal_mass_schur(kkt, d_m), FactorKind::Cholesky);
        for (Index i = 0; i < nf; ++i) a.row(i) /= d_m[i];
        Vector col(static_cast<std::size_t>(nd));
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < nd; ++i) col[i] = a(nf + i, j);
            d_sm.solve_in_place(col);
            for (Index i = 0; i < nd; ++i) a(nf + i, j) = col[i];
        }
    } else {
        const Factorization mff(mb.FF, FactorKind::Cholesky);
        const std::vector<double> sm = exact_mass_schur(kkt);
        const Eigen::LLT<Eigen::MatrixXd> llt(Eigen::Map<const RowMatrix>(sm.data(), nd, nd));
        Vector col(static_cast<std::size_t>(nf));
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < nf; ++i) col[i] = a(i, j);
            mff.solve_in_place(col);
            for (Index i = 0; i < nf; ++i) a(i, j) = col[i];
        }
        a.bottomRows(nd) = llt.solve(Eigen::MatrixXd(a.bottomRows(nd)));
    }
    return {a.data(), a.data() + n * n};
}

std::vector<double> preconditioned_kkt(const KktSystem& kkt, const Preconditioner& p, Index cap) {
    const Index n = kkt.size();
    check_cap(n, cap, "preconditioned_kkt");
    std::vector<double> out(static_cast<std::size_t>(n * n));
    Vector e(static_cast<std::size_t>(n), 0.0), col(e.size()), pc(e.size());
    for (Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        kkt.apply(e, col);
        e[j] = 0.0;
        p.apply(col, pc);
        for (Index i = 0; i < n; ++i) out[i * n + j] = pc[i];
    }
    return out;
}

}  // namespace mgoc::optcontrol
