#pragma once

#include <span>
#include <vector>

#include "mgoc/assembly/assembly.hpp"

namespace mgoc::optcontrol {

using assembly::FeOperators;
using linalg::Index;
using linalg::SparseMatrix;
using linalg::Vector;

/// The symmetric saddle-point system of the discrete optimality conditions
///
///   [ M_FF   M_FD        K_FF^T ] [ y_F ]   [ ybar_F ]
///   [ M_DF   M_DD + bI   K_FD^T ] [ u   ] = [ ybar_D ]
///   [ K_FF   K_FD        0      ] [ p_F ]   [ f_F    ]
///
/// applied matrix-free from the stored blocks. The multiplier p_F here is the
/// negative of the adjoint state p_h. The referenced operators must outlive
/// the system.
class KktSystem {
public:
    KktSystem(const FeOperators& ops, double beta);

    const FeOperators& operators() const { return *ops_; }
    double beta() const { return beta_; }
    Index n_free() const { return nf_; }
    Index n_control() const { return nd_; }
    Index size() const { return 2 * nf_ + nd_; }
    const Vector& rhs() const { return rhs_; }

    void apply(std::span<const double> x, std::span<double> y) const;
    Vector apply(std::span<const double> x) const;

    /// Row-major dense copy; throws std::length_error above `cap` rows.
    std::vector<double> to_dense(Index cap = 4000) const;

    /// Views into a stacked (y_F, u, p_F) vector.
    std::span<const double> state_part(std::span<const double> x) const { return x.first(nf_); }
    std::span<const double> control_part(std::span<const double> x) const {
        return x.subspan(nf_, nd_);
    }
    std::span<const double> multiplier_part(std::span<const double> x) const {
        return x.subspan(nf_ + nd_, nf_);
    }

private:
    const FeOperators* ops_;
    double beta_;
    std::size_t nf_;
    std::size_t nd_;
    Vector rhs_;
};

/// Throws std::invalid_argument when beta <= 0.
KktSystem build_kkt(const FeOperators& ops, double beta);

}  // namespace mgoc::optcontrol
