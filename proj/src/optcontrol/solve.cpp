#include "mgoc/optcontrol/solve.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <stdexcept>
#include <string>

#include "mgoc/pde/pde.hpp"

namespace mgoc::optcontrol {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SolverKind parse_solver_kind(std::string_view name) {
    if (name == "gmres") return SolverKind::Gmres;
    if (name == "minres") return SolverKind::Minres;
    throw std::invalid_argument("unknown solver '" + std::string(name) +
                                "' (expected gmres or minres)");
}

std::string_view to_string(SolverKind kind) {
    return kind == SolverKind::Gmres ? "gmres" : "minres";
}

Index default_max_it(PreconKind precon, Index n) {
    return precon == PreconKind::None ? n : std::min<Index>(n, 1000);
}

OcpSolution solve_kkt(const assembly::FeOperators& ops, double beta, const SolveOptions& opts) {
    if (opts.solver == SolverKind::Minres && opts.precon == PreconKind::MatchedNonsymmetric)
        throw std::invalid_argument("minres needs a symmetric positive definite preconditioner");
    const auto t_setup = Clock::now();
    const KktSystem kkt = build_kkt(ops, beta);
    const Preconditioner precon = build_preconditioner(opts.precon, kkt);
    const double setup = seconds_since(t_setup);

    const LinearOp a = [&](std::span<const double> x, std::span<double> y) { kkt.apply(x, y); };
    LinearOp p;
    if (opts.precon != PreconKind::None)
        p = [&](std::span<const double> x, std::span<double> y) { precon.apply(x, y); };
    KrylovOptions kopts{opts.tol, opts.max_it > 0 ? opts.max_it : default_max_it(opts.precon, kkt.size())};

    const auto t_solve = Clock::now();
    KrylovResult r = opts.solver == SolverKind::Gmres ? gmres(a, p, kkt.rhs(), kopts)
                                                      : minres(a, p, kkt.rhs(), kopts);
    const double solve = seconds_since(t_solve);

    const auto nf = static_cast<std::size_t>(kkt.n_free());
    const auto nd = static_cast<std::size_t>(kkt.n_control());
    const std::span<const double> x = r.x;

    OcpSolution s;
    s.u.assign(x.begin() + static_cast<std::ptrdiff_t>(nf),
               x.begin() + static_cast<std::ptrdiff_t>(nf + nd));
    s.y.mesh = ops.mesh;
    s.y.values.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nf + nd));
    s.p.mesh = ops.mesh;
    s.p.values.assign(nf + nd, 0.0);
    for (std::size_t i = 0; i < nf; ++i) s.p.values[i] = -x[nf + nd + i];

    auto& st = s.stats;
    st.iterations = r.iterations;
    st.converged = r.converged;
    st.n_dof = ops.mesh->n_dof();
    st.kkt_size = kkt.size();
    st.setup_seconds = setup;
    st.solve_seconds = solve;
    st.residual_history = std::move(r.residual_history);

    Vector res = kkt.apply(x);
    const Vector& b = kkt.rhs();
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = b[i] - res[i];
    const double bnorm = linalg::norm2(b);
    const double scale = bnorm > 0.0 ? bnorm : 1.0;
    const std::span<const double> rs = res;
    st.relative_residual = linalg::norm2(rs) / scale;
    st.block_residuals = {linalg::norm2(rs.first(nf)) / scale,
                          linalg::norm2(rs.subspan(nf, nd)) / scale,
                          linalg::norm2(rs.subspan(nf + nd)) / scale};

    // K_h p = (K p)_D - (M (y - ȳ))_D with p_D = 0.
    const std::span<const double> pv = s.p.values;
    const std::span<const double> yv = s.y.values;
    Vector opt = linalg::spmv(ops.Kb.DF, pv.first(nf));
    linalg::spmv_add(ops.Mb.DF, yv.first(nf), opt, -1.0);
    linalg::spmv_add(ops.Mb.DD, yv.subspan(nf), opt, -1.0);
    for (std::size_t k = 0; k < nd; ++k) opt[k] = beta * s.u[k] - (opt[k] + ops.ybar_D()[k]);
    st.optimality_residual = linalg::norm2(opt) / scale;
    return s;
}

OcpSolution solve_ocp(const graphs::MetricGraph& g, Index n_e, const assembly::ProblemData& data,
                      const SolveOptions& opts) {
    const auto mesh = mesh::build_mesh(g, n_e);
    const auto ops = assembly::assemble(mesh, data);
    return solve_kkt(ops, data.beta, opts);
}

double objective(const assembly::FeOperators& ops, const assembly::ProblemData& data,
                 std::span<const double> y, std::span<const double> u) {
    const auto& m = *ops.mesh;
    double ybar_sq = 0.0;
    if (data.ybar.is_piecewise_constant()) {
        for (Index e = 0; e < m.n_edges(); ++e) {
            const double v = data.ybar.on_edge(e);
            ybar_sq += v * v * m.graph().length(e);
        }
    } else {
        ybar_sq = linalg::dot(assembly::interpolate(m, data.ybar), ops.ybar_vec);
    }
    const double misfit = pde::l2_inner(ops, y, y) - 2.0 * linalg::dot(y, ops.ybar_vec) + ybar_sq;
    return 0.5 * misfit + 0.5 * data.beta * linalg::dot(u, u);
}

Vector reduced_oracle(const assembly::FeOperators& ops, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("reduced_oracle: beta must be positive");
    const Index nd = ops.n_dirichlet();
    if (nd > kOracleCap)
        throw std::length_error("reduced_oracle: " + std::to_string(nd) + " controls exceed cap " +
                                std::to_string(kOracleCap));
    const pde::ForwardSolver fwd(ops);
    const Vector zero(static_cast<std::size_t>(nd), 0.0);
    const Vector y_f = fwd.solve_state(zero, ops.f_vec).y_f.values;
    const Vector m_yf = linalg::spmv(ops.M, y_f);

    std::vector<Vector> ms(static_cast<std::size_t>(nd));  // M S_h e_i
    std::vector<Vector> s(static_cast<std::size_t>(nd));   // S_h e_i
    Vector e(static_cast<std::size_t>(nd), 0.0);
    for (Index i = 0; i < nd; ++i) {
        e[i] = 1.0;
        s[i] = fwd.harmonic_extension(e).values;
        e[i] = 0.0;
        ms[i] = linalg::spmv(ops.M, s[i]);
    }
    Eigen::MatrixXd g(nd, nd);
    Eigen::VectorXd r(nd);
    for (Index i = 0; i < nd; ++i) {
        for (Index j = 0; j <= i; ++j) g(i, j) = g(j, i) = linalg::dot(s[i], ms[j]);
        g(i, i) += beta;
        r(i) = linalg::dot(ops.ybar_vec, s[i]) - linalg::dot(m_yf, s[i]);
    }
    const Eigen::VectorXd u = g.llt().solve(r);
    return {u.data(), u.data() + nd};
}

Vector reduced_oracle(const graphs::MetricGraph& g, Index n_e, const assembly::ProblemData& data) {
    const auto mesh = mesh::build_mesh(g, n_e);
    const auto ops = assembly::assemble(mesh, data);
    return reduced_oracle(ops, data.beta);
}

}  // namespace mgoc::optcontrol
