#pragma once

#include <span>

#include "mgoc/assembly/assembly.hpp"
#include "mgoc/linalg/factorization.hpp"

namespace mgoc::pde {

using assembly::FeOperators;
using linalg::Index;
using linalg::Vector;
using mesh::PiecewiseLinearFunction;

/// Discrete state y = y_u + y_f with y_u = S_h u (discrete harmonic extension
/// of the Dirichlet data) and y_f the solution with homogeneous Dirichlet data.
struct StateSolution {
    PiecewiseLinearFunction y;
    PiecewiseLinearFunction y_u;
    PiecewiseLinearFunction y_f;
};

/// Forward and adjoint solves sharing one Cholesky factorization of K_FF.
///
/// Throws std::domain_error("operator not coercive ...") when K_FF is
/// singular, i.e. some connected component has neither a Dirichlet vertex nor
/// a positive potential.
class ForwardSolver {
public:
    explicit ForwardSolver(const FeOperators& ops);

    const FeOperators& operators() const { return *ops_; }

    /// K_FF y_F = f_F - K_FD u, y_D = u. `f_vec` is a full-length load vector.
    StateSolution solve_state(std::span<const double> u, std::span<const double> f_vec) const;

    /// S_h u.
    PiecewiseLinearFunction harmonic_extension(std::span<const double> u) const;

    /// P_h r for a nodal residual r: K_FF p_F = (M r)_F, p_D = 0.
    PiecewiseLinearFunction solve_adjoint(const PiecewiseLinearFunction& residual) const;
    /// Same with the right-hand side given as a full load vector b (b^T v = (r, v_h)).
    PiecewiseLinearFunction solve_adjoint_load(std::span<const double> load) const;

    /// K_h p = [K p - M r]_D, the variational flux at the Dirichlet vertices,
    /// where p = P_h r.
    Vector discrete_kirchhoff(const PiecewiseLinearFunction& p,
                              const PiecewiseLinearFunction& residual) const;
    Vector discrete_kirchhoff_load(const PiecewiseLinearFunction& p,
                                   std::span<const double> load) const;

    /// Solves K_FF x = rhs.
    Vector solve_free(std::span<const double> rhs) const;

private:
    const FeOperators* ops_;
    linalg::Factorization kff_;
};

// Norms of piecewise-linear functions computed with the operators' matrices.
double l2_norm(const FeOperators& ops, std::span<const double> v);
double h1_seminorm(const FeOperators& ops, std::span<const double> v);
double h1_norm(const FeOperators& ops, std::span<const double> v);
/// (v, w)_{L^2(Γ)}
double l2_inner(const FeOperators& ops, std::span<const double> v, std::span<const double> w);

}  // namespace mgoc::pde
