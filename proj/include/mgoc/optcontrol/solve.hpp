#pragma once

#include <array>
#include <string_view>

#include "mgoc/assembly/assembly.hpp"
#include "mgoc/optcontrol/kkt.hpp"
#include "mgoc/optcontrol/krylov.hpp"
#include "mgoc/optcontrol/preconditioner.hpp"

namespace mgoc::optcontrol {

using mesh::PiecewiseLinearFunction;

enum class SolverKind { Gmres, Minres };

SolverKind parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);

struct SolveOptions {
    SolverKind solver = SolverKind::Gmres;
    PreconKind precon = PreconKind::MatchedNonsymmetric;
    double tol = 1e-8;
    /// 0 selects min(n, 1000) with a preconditioner and n without one.
    Index max_it = 0;
};

Index default_max_it(PreconKind precon, Index n);

struct SolveStats {
    Index iterations = 0;
    bool converged = false;
    Index n_dof = 0;
    Index kkt_size = 0;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
    /// ‖b - Ax‖/‖b‖ of the KKT system.
    double relative_residual = 0.0;
    /// Per block row, each relative to ‖b‖.
    std::array<double, 3> block_residuals{};
    /// ‖βu - K_h p‖ / ‖b‖ with the reported (sign-corrected) p.
    double optimality_residual = 0.0;
    Vector residual_history;
};

struct OcpSolution {
    PiecewiseLinearFunction y;
    Vector u;
    /// Adjoint state p_h with p_D = 0 and βu = K_h p at the optimum.
    PiecewiseLinearFunction p;
    SolveStats stats;
};

/// Solves the KKT system of assembled operators. MINRES requires a symmetric
/// positive definite preconditioner (none, ideal or sym).
OcpSolution solve_kkt(const assembly::FeOperators& ops, double beta, const SolveOptions& opts = {});

/// Meshes the graph with n_e intervals per edge, assembles and solves.
OcpSolution solve_ocp(const graphs::MetricGraph& g, Index n_e, const assembly::ProblemData& data,
                      const SolveOptions& opts = {});

/// J(y, u) = ½‖y - ȳ‖²_{L²} + β/2 |u|².
double objective(const assembly::FeOperators& ops, const assembly::ProblemData& data,
                 std::span<const double> y, std::span<const double> u);

/// Largest n_D accepted by reduced_oracle.
inline constexpr Index kOracleCap = 500;

/// Minimizer of the reduced objective from the dense normal equations
/// (S^T M S + βI) u = S^T (ȳ_vec - M y_f), built from n_D harmonic extensions.
/// Throws std::length_error when n_D exceeds kOracleCap.
Vector reduced_oracle(const assembly::FeOperators& ops, double beta);
Vector reduced_oracle(const graphs::MetricGraph& g, Index n_e, const assembly::ProblemData& data);

}  // namespace mgoc::optcontrol
