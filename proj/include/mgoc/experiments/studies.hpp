#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgoc/graphs/generators.hpp"
#include "mgoc/linalg/dense_eigs.hpp"
#include "mgoc/optcontrol/solve.hpp"

namespace mgoc::experiments {

using linalg::Index;
using optcontrol::PreconKind;
using optcontrol::SolverKind;

/// Builds a graph from a spec string:
///   star:K    K Dirichlet leaves around a Kirchhoff centre
///   path:N    N vertices, Dirichlet ends
///   fdmL:N    L-shaped lattice graph with `controls` random Dirichlet vertices
///   *.json    graph JSON
///   *.mtx     MatrixMarket adjacency with `controls` random Dirichlet vertices
/// File graphs get unit lengths unless `euclidean` is set.
graphs::MetricGraph make_graph(const std::string& spec, Index controls, std::uint64_t seed,
                               bool euclidean = false);

struct StudyConfig {
    std::string graph = "star:12";
    std::vector<double> betas{1e-2};
    std::vector<Index> n_e{8};
    SolverKind solver = SolverKind::Gmres;
    std::vector<PreconKind> precons{PreconKind::MatchedNonsymmetric};
    double tol = 1e-8;
    Index max_it = 0;
    std::uint64_t seed = 1;
    Index controls = 12;
    bool euclidean = false;
    double c0 = 0.0;
    double f = 0.0;
    double ybar = 1.0;
    /// Unpreconditioned comparison column in iteration studies.
    bool unpreconditioned = true;
    /// Iteration cap of the comparison runs; 0 means the KKT size.
    Index unprec_max_it = 0;
    /// Convergence study reference; 0 means four times the finest level.
    Index reference_n_e = 0;
    int jobs = 1;

    /// Throws std::invalid_argument on empty sweeps or tol <= 0.
    void validate() const;
    assembly::ProblemData data(double beta) const;
};

struct IterationCell {
    double beta = 0.0;
    Index n_e = 0;
    Index n_dof = 0;
    Index iterations = 0;
    bool converged = false;
    double seconds = 0.0;
    bool unprec_run = false;
    Index unprec_iterations = 0;
    bool unprec_converged = false;
    double unprec_seconds = 0.0;
};

/// One cell per (β, n_e), β-major, using cfg.precons.front(). Cells run on up
/// to cfg.jobs threads; the order of the result does not depend on it.
std::vector<IterationCell> iteration_study(const StudyConfig& cfg);
/// Non-converged runs are written as "--".
void write_iteration_csv(std::ostream& os, const std::vector<IterationCell>& cells);

struct ConvergenceRecord {
    Index n_e = 0;
    Index n_dof = 0;
    double h = 0.0;
    double err_u = 0.0;
    double err_l2 = 0.0;
    double err_h1 = 0.0;
    double err_h1_semi = 0.0;
    // log2-type orders against the previous level; NaN on the first.
    double eoc_u = 0.0;
    double eoc_l2 = 0.0;
    double eoc_h1 = 0.0;
    double eoc_h1_semi = 0.0;
    Index iterations = 0;
};

/// Errors of each level against the solution at cfg.reference_n_e, with the
/// state prolonged to the reference mesh. Uses cfg.betas.front(). Levels must
/// be ascending and each must divide the reference.
std::vector<ConvergenceRecord> convergence_study(const StudyConfig& cfg);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& recs);

struct EigenSet {
    /// Preconditioner name, or "mass_exact" / "mass_diag" for the mass block.
    std::string label;
    double beta = 0.0;
    std::vector<std::complex<double>> values;

    double min_abs() const;
    double max_abs() const;
};

/// Spectra of P^{-1} KKT for each of cfg.precons and each β on the mesh with
/// cfg.n_e.front() intervals per edge, followed by blkdiag(M_FF, S_M)^{-1} and
/// blkdiag(D_M, D_SM)^{-1} applied to the mass block.
std::vector<EigenSet> eig_probe(const StudyConfig& cfg, Index cap = linalg::kDefaultEigCap);
void write_eig_csv(std::ostream& os, const std::vector<EigenSet>& sets);

/// Entry point of the command-line tool.
int cli_main(int argc, char** argv);

}  // namespace mgoc::experiments
