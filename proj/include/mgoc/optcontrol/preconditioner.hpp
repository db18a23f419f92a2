#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mgoc/linalg/factorization.hpp"
#include "mgoc/optcontrol/kkt.hpp"

namespace mgoc::optcontrol {

enum class PreconKind { None, Ideal, MatchedSymmetric, MatchedNonsymmetric };

/// Accepts "none", "ideal", "sym", "nonsym" and the long names
/// "matched_symmetric" / "matched_nonsymmetric".
PreconKind parse_precon_kind(std::string_view name);
std::string_view to_string(PreconKind kind);

/// Size cap for the dense Schur complement of the ideal preconditioner.
inline constexpr Index kIdealCap = 3000;

/// Block-diagonal preconditioner for the KKT system, applied as P^{-1}.
///
///   none                 I
///   ideal                blkdiag(Mblk, S),  Mblk = [M_FF M_FD; M_DF M_DD+bI],
///                        S = [K_FF K_FD] Mblk^{-1} [K_FF K_FD]^T (dense)
///   matched_symmetric    blkdiag(D_M, D_SM, (K_FF+N) D_M^{-1} (K_FF+N)^T)
///   matched_nonsymmetric blkdiag(D_M, D_SM, (K_FF+M_FF) M_FF^{-1} (K_FF^T+N2))
///
/// with D_M = diag(M_FF), D_SM = M_DD + bI - M_DF D_M^{-1} M_FD,
/// N2 = K_FD D_SM^{-1} K_FD^T, D_KDK = row_lump(N2) and
/// N = D_KDK^{1/2} D_M^{1/2}. All inner solves are factorized at construction.
class Preconditioner {
public:
    Preconditioner(PreconKind kind, const KktSystem& kkt);
    ~Preconditioner();
    Preconditioner(Preconditioner&&) noexcept;
    Preconditioner& operator=(Preconditioner&&) noexcept;

    PreconKind kind() const { return kind_; }
    Index size() const { return 2 * nf_ + nd_; }
    /// True when P is symmetric positive definite (usable with MINRES).
    bool is_spd() const { return kind_ != PreconKind::MatchedNonsymmetric; }

    /// y = P^{-1} x
    void apply(std::span<const double> x, std::span<double> y) const;
    Vector apply(std::span<const double> x) const;

    // Stored pieces; empty when the kind does not use them.
    const Vector& D_M() const { return d_m_; }
    const SparseMatrix& D_SM() const { return d_sm_; }
    const SparseMatrix& KDK() const { return kdk_; }
    const Vector& D_KDK() const { return d_kdk_; }
    const Vector& N() const { return n_; }

private:
    struct Impl;
    PreconKind kind_;
    Index nf_;
    Index nd_;
    Vector d_m_;
    SparseMatrix d_sm_;
    SparseMatrix kdk_;
    Vector d_kdk_;
    Vector n_;
    std::unique_ptr<Impl> impl_;
};

/// Throws std::invalid_argument when the system has no Dirichlet vertex,
/// std::domain_error when D_SM has a nonpositive diagonal entry or D_KDK a
/// negative one, and std::domain_error("matched Schur block not SPD") when
/// K_FF + N cannot be Cholesky-factorized.
Preconditioner build_preconditioner(PreconKind kind, const KktSystem& kkt);

/// Mass block Mblk = [M_FF M_FD; M_DF M_DD+bI] as a sparse matrix.
SparseMatrix mass_block(const KktSystem& kkt);

/// Exact S_M = M_DD + bI - M_DF M_FF^{-1} M_FD, row-major dense (n_D x n_D).
std::vector<double> exact_mass_schur(const KktSystem& kkt);

/// Row-major dense blkdiag(M_FF, S_M)^{-1} Mblk, or with `diagonal` set
/// blkdiag(D_M, D_SM)^{-1} Mblk. Throws std::length_error above `cap` rows.
std::vector<double> preconditioned_mass_block(const KktSystem& kkt, bool diagonal,
                                              Index cap = 2000);

/// Row-major dense P^{-1} KKT. Throws std::length_error above `cap` rows.
std::vector<double> preconditioned_kkt(const KktSystem& kkt, const Preconditioner& p,
                                       Index cap = 2000);

}  // namespace mgoc::optcontrol
