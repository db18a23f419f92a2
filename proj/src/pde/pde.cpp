#include "mgoc/pde/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgoc/error.hpp"

namespace mgoc::pde {

namespace {

linalg::Factorization factor_kff(const FeOperators& ops) {
    if (!ops.coercive)
        throw std::domain_error(
            "operator not coercive: a connected component has no Dirichlet vertex and c0 = 0");
    try {
        return linalg::factor(ops.Kb.FF, linalg::FactorKind::Cholesky);
    } catch (const FactorizationError& e) {
        throw std::domain_error(std::string("operator not coercive: ") + e.what());
    }
}

}  // namespace

ForwardSolver::ForwardSolver(const FeOperators& ops) : ops_(&ops), kff_(factor_kff(ops)) {}

Vector ForwardSolver::solve_free(std::span<const double> rhs) const { return kff_.solve(rhs); }

StateSolution ForwardSolver::solve_state(std::span<const double> u,
                                         std::span<const double> f_vec) const {
    const Index nf = ops_->n_free();
    const Index nd = ops_->n_dirichlet();
    if (static_cast<Index>(u.size()) != nd)
        throw std::invalid_argument("solve_state: control has the wrong length");
    if (static_cast<Index>(f_vec.size()) != nf + nd)
        throw std::invalid_argument("solve_state: load vector has the wrong length");

    StateSolution s;
    s.y_u = harmonic_extension(u);
    s.y_f.mesh = ops_->mesh;
    s.y_f.values.assign(static_cast<std::size_t>(nf + nd), 0.0);
    const Vector yf = kff_.solve(f_vec.first(static_cast<std::size_t>(nf)));
    std::copy(yf.begin(), yf.end(), s.y_f.values.begin());

    s.y = s.y_u;
    linalg::axpy(1.0, s.y_f.values, s.y.values);
    // Exact Dirichlet values, not y_u + 0 after rounding.
    std::copy(u.begin(), u.end(), s.y.values.begin() + nf);
    return s;
}

PiecewiseLinearFunction ForwardSolver::harmonic_extension(std::span<const double> u) const {
    if (static_cast<Index>(u.size()) != ops_->n_dirichlet())
        throw std::invalid_argument("harmonic_extension: control has the wrong length");
    Vector rhs = linalg::spmv(ops_->Kb.FD, u);
    for (double& v : rhs) v = -v;
    kff_.solve_in_place(rhs);
    PiecewiseLinearFunction out{ops_->mesh, std::move(rhs)};
    out.values.insert(out.values.end(), u.begin(), u.end());
    return out;
}

PiecewiseLinearFunction ForwardSolver::solve_adjoint(const PiecewiseLinearFunction& residual) const {
    return solve_adjoint_load(linalg::spmv(ops_->M, residual.values));
}

PiecewiseLinearFunction ForwardSolver::solve_adjoint_load(std::span<const double> load) const {
    const Index nf = ops_->n_free();
    if (static_cast<Index>(load.size()) != ops_->mesh->n_dof())
        throw std::invalid_argument("solve_adjoint: load vector has the wrong length");
    // K is symmetric, so K_FF^T = K_FF shares the factorization.
    Vector p = kff_.solve(load.first(static_cast<std::size_t>(nf)));
    p.resize(static_cast<std::size_t>(ops_->mesh->n_dof()), 0.0);
    return {ops_->mesh, std::move(p)};
}

Vector ForwardSolver::discrete_kirchhoff(const PiecewiseLinearFunction& p,
                                         const PiecewiseLinearFunction& residual) const {
    return discrete_kirchhoff_load(p, linalg::spmv(ops_->M, residual.values));
}

Vector ForwardSolver::discrete_kirchhoff_load(const PiecewiseLinearFunction& p,
                                              std::span<const double> load) const {
    const Index nf = ops_->n_free();
    // Only the Dirichlet rows of K p are needed: K_DF p_F + K_DD p_D.
    Vector out = linalg::spmv(ops_->Kb.DF, std::span(p.values).first(static_cast<std::size_t>(nf)));
    linalg::spmv_add(ops_->Kb.DD, std::span(p.values).subspan(static_cast<std::size_t>(nf)), out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= load[static_cast<std::size_t>(nf) + k];
    return out;
}

double l2_inner(const FeOperators& ops, std::span<const double> v, std::span<const double> w) {
    return linalg::dot(v, linalg::spmv(ops.M, w));
}

double l2_norm(const FeOperators& ops, std::span<const double> v) {
    return std::sqrt(std::max(0.0, l2_inner(ops, v, v)));
}

double h1_seminorm(const FeOperators& ops, std::span<const double> v) {
    return std::sqrt(std::max(0.0, linalg::dot(v, linalg::spmv(ops.A, v))));
}

double h1_norm(const FeOperators& ops, std::span<const double> v) {
    const double l2 = l2_norm(ops, v);
    const double semi = h1_seminorm(ops, v);
    return std::sqrt(l2 * l2 + semi * semi);
}

}  // namespace mgoc::pde
