#include "mgoc/optcontrol/kkt.hpp"

#include <stdexcept>
#include <string>

namespace mgoc::optcontrol {

KktSystem::KktSystem(const FeOperators& ops, double beta)
    : ops_(&ops),
      beta_(beta),
      nf_(static_cast<std::size_t>(ops.n_free())),
      nd_(static_cast<std::size_t>(ops.n_dirichlet())) {
    if (!(beta > 0.0)) throw std::invalid_argument("build_kkt: beta must be positive");
    rhs_.reserve(2 * nf_ + nd_);
    rhs_.insert(rhs_.end(), ops.ybar_F().begin(), ops.ybar_F().end());
    rhs_.insert(rhs_.end(), ops.ybar_D().begin(), ops.ybar_D().end());
    rhs_.insert(rhs_.end(), ops.f_F().begin(), ops.f_F().end());
}

void KktSystem::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != 2 * nf_ + nd_ || y.size() != x.size())
        throw std::invalid_argument("KktSystem::apply: size mismatch");
    const auto yF = x.first(nf_);
    const auto u = x.subspan(nf_, nd_);
    const auto pF = x.subspan(nf_ + nd_, nf_);
    auto out1 = y.first(nf_);
    auto out2 = y.subspan(nf_, nd_);
    auto out3 = y.subspan(nf_ + nd_, nf_);
    std::fill(y.begin(), y.end(), 0.0);

    const auto& M = ops_->Mb;
    const auto& K = ops_->Kb;
    // K_FF and M are symmetric, so the transposed blocks are the stored ones.
    linalg::spmv_add(M.FF, yF, out1);
    linalg::spmv_add(M.FD, u, out1);
    linalg::spmv_add(K.FF, pF, out1);

    linalg::spmv_add(M.DF, yF, out2);
    linalg::spmv_add(M.DD, u, out2);
    for (std::size_t k = 0; k < nd_; ++k) out2[k] += beta_ * u[k];
    linalg::spmv_add(K.DF, pF, out2);

    linalg::spmv_add(K.FF, yF, out3);
    linalg::spmv_add(K.FD, u, out3);
}

Vector KktSystem::apply(std::span<const double> x) const {
    Vector y(x.size());
    apply(x, y);
    return y;
}

std::vector<double> KktSystem::to_dense(Index cap) const {
    const auto n = static_cast<std::size_t>(size());
    if (static_cast<Index>(n) > cap)
        throw std::length_error("KktSystem::to_dense: size " + std::to_string(n) +
                                " exceeds cap " + std::to_string(cap));
    std::vector<double> d(n * n);
    Vector e(n, 0.0), col(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply(e, col);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) d[i * n + j] = col[i];
    }
    return d;
}

KktSystem build_kkt(const FeOperators& ops, double beta) { return {ops, beta}; }

}  // namespace mgoc::optcontrol
