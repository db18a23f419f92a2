#include "mgoc/experiments/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mgoc/pde/pde.hpp"

namespace mgoc::experiments {

using linalg::Vector;
using optcontrol::SolveOptions;

namespace {

Index parse_count(const std::string& spec, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0)
        throw std::invalid_argument("bad graph spec '" + spec + "': expected an integer after ':'");
    return static_cast<Index>(v);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
template <class F>
void parallel_for(std::size_t n, int jobs, F body) {
    const auto workers = static_cast<std::size_t>(std::clamp<int>(jobs, 1, 64));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, n); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double order(double err_prev, double err, double h_prev, double h) {
    if (!(err_prev > 0.0) || !(err > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(err_prev / err) / std::log(h_prev / h);
}

}  // namespace

graphs::MetricGraph make_graph(const std::string& spec, Index controls, std::uint64_t seed,
                               bool euclidean) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos && spec.find('/') == std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const Index n = parse_count(spec, spec.substr(colon + 1));
        if (kind == "star") return graphs::make_star(n, graphs::VertexType::Dirichlet);
        if (kind == "path") return graphs::make_path(n);
        if (kind == "fdmL") return graphs::make_fdm_L_graph(n, controls, seed);
        throw std::invalid_argument("unknown graph generator '" + kind +
                                    "' (expected star, path or fdmL)");
    }
    if (ends_with(spec, ".json")) return graphs::load_graph_json(spec);
    if (ends_with(spec, ".mtx")) {
        graphs::CombinatorialGraph base = graphs::load_matrix_market(spec);
        auto lengths = graphs::edge_lengths(
            base, euclidean ? graphs::LengthRule::Euclidean : graphs::LengthRule::Unit);
        auto types = graphs::random_dirichlet_types(base.n_vertices(), controls, seed);
        return {std::move(base), std::move(lengths), std::move(types)};
    }
    throw std::invalid_argument("cannot interpret graph spec '" + spec + "'");
}

void StudyConfig::validate() const {
    if (betas.empty()) throw std::invalid_argument("study: no beta values");
    if (n_e.empty()) throw std::invalid_argument("study: no mesh levels");
    if (precons.empty()) throw std::invalid_argument("study: no preconditioners");
    if (!(tol > 0.0)) throw std::invalid_argument("study: tol must be positive");
    for (double b : betas)
        if (!(b > 0.0)) throw std::invalid_argument("study: beta must be positive");
    for (Index k : n_e)
        if (k < 1) throw std::invalid_argument("study: n_e must be at least 1");
}

assembly::ProblemData StudyConfig::data(double beta) const {
    assembly::ProblemData d;
    d.beta = beta;
    d.c0 = c0;
    d.f = f;
    d.ybar = ybar;
    return d;
}

std::vector<IterationCell> iteration_study(const StudyConfig& cfg) {
    cfg.validate();
    const auto g = make_graph(cfg.graph, cfg.controls, cfg.seed, cfg.euclidean);
    std::vector<mesh::MeshPtr> meshes;
    for (Index k : cfg.n_e) meshes.push_back(mesh::build_mesh(g, k));

    std::vector<IterationCell> cells(cfg.betas.size() * cfg.n_e.size());
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t idx) {
        const std::size_t bi = idx / cfg.n_e.size();
        const std::size_t ki = idx % cfg.n_e.size();
        const auto ops = assembly::assemble(meshes[ki], cfg.data(cfg.betas[bi]));
        IterationCell& c = cells[idx];
        c.beta = cfg.betas[bi];
        c.n_e = cfg.n_e[ki];
        c.n_dof = meshes[ki]->n_dof();

        SolveOptions opts{cfg.solver, cfg.precons.front(), cfg.tol, cfg.max_it};
        const auto s = optcontrol::solve_kkt(ops, c.beta, opts);
        c.iterations = s.stats.iterations;
        c.converged = s.stats.converged;
        c.seconds = s.stats.setup_seconds + s.stats.solve_seconds;

        if (cfg.unpreconditioned) {
            SolveOptions plain{SolverKind::Gmres, PreconKind::None, cfg.tol, cfg.unprec_max_it};
            const auto u = optcontrol::solve_kkt(ops, c.beta, plain);
            c.unprec_run = true;
            c.unprec_iterations = u.stats.iterations;
            c.unprec_converged = u.stats.converged;
            c.unprec_seconds = u.stats.setup_seconds + u.stats.solve_seconds;
        }
    });
    return cells;
}

void write_iteration_csv(std::ostream& os, const std::vector<IterationCell>& cells) {
    const auto precision = os.precision(12);
    os << "beta,n_e,n_dof,iterations,seconds,unprec_iterations,unprec_seconds\n";
    for (const auto& c : cells) {
        os << c.beta << ',' << c.n_e << ',' << c.n_dof << ',';
        if (c.converged) os << c.iterations; else os << "--";
        os << ',' << c.seconds << ',';
        if (!c.unprec_run) os << ",";
        else {
            if (c.unprec_converged) os << c.unprec_iterations; else os << "--";
            os << ',' << c.unprec_seconds;
        }
        os << '\n';
    }
    os.precision(precision);
}

std::vector<ConvergenceRecord> convergence_study(const StudyConfig& cfg) {
    cfg.validate();
    for (std::size_t k = 1; k < cfg.n_e.size(); ++k)
        if (cfg.n_e[k] <= cfg.n_e[k - 1])
            throw std::invalid_argument("convergence study: levels must be ascending");
    const Index finest = cfg.n_e.back();
    const Index ref_n = cfg.reference_n_e > 0 ? cfg.reference_n_e : 4 * finest;
    for (Index k : cfg.n_e)
        if (ref_n % k != 0)
            throw std::invalid_argument("convergence study: level " + std::to_string(k) +
                                        " is not nested in the reference " + std::to_string(ref_n));

    const auto g = make_graph(cfg.graph, cfg.controls, cfg.seed, cfg.euclidean);
    const double beta = cfg.betas.front();
    const auto data = cfg.data(beta);
    const SolveOptions opts{cfg.solver, cfg.precons.front(), cfg.tol, cfg.max_it};

    const auto ref_mesh = mesh::build_mesh(g, ref_n);
    const auto ref_ops = assembly::assemble(ref_mesh, data);
    const auto ref = optcontrol::solve_kkt(ref_ops, beta, opts);
    if (!ref.stats.converged)
        throw std::runtime_error("convergence study: reference solve did not converge");

    std::vector<ConvergenceRecord> recs(cfg.n_e.size());
    parallel_for(recs.size(), cfg.jobs, [&](std::size_t i) {
        const auto m = mesh::build_mesh(g, cfg.n_e[i]);
        const auto ops = assembly::assemble(m, data);
        const auto s = optcontrol::solve_kkt(ops, beta, opts);
        if (!s.stats.converged)
            throw std::runtime_error("convergence study: solve at n_e = " +
                                     std::to_string(cfg.n_e[i]) + " did not converge");
        ConvergenceRecord& r = recs[i];
        r.n_e = cfg.n_e[i];
        r.n_dof = m->n_dof();
        r.h = m->h_max();
        r.iterations = s.stats.iterations;
        Vector du = s.u;
        linalg::axpy(-1.0, ref.u, du);
        r.err_u = linalg::norm2(du);
        Vector dy = mesh::prolong(s.y, ref_mesh).values;
        linalg::axpy(-1.0, ref.y.values, dy);
        r.err_l2 = pde::l2_norm(ref_ops, dy);
        r.err_h1 = pde::h1_norm(ref_ops, dy);
        r.err_h1_semi = pde::h1_seminorm(ref_ops, dy);
    });

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < recs.size(); ++i) {
        auto& r = recs[i];
        if (i == 0) {
            r.eoc_u = r.eoc_l2 = r.eoc_h1 = r.eoc_h1_semi = nan;
            continue;
        }
        const auto& p = recs[i - 1];
        r.eoc_u = order(p.err_u, r.err_u, p.h, r.h);
        r.eoc_l2 = order(p.err_l2, r.err_l2, p.h, r.h);
        r.eoc_h1 = order(p.err_h1, r.err_h1, p.h, r.h);
        r.eoc_h1_semi = order(p.err_h1_semi, r.err_h1_semi, p.h, r.h);
    }
    return recs;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& recs) {
    const auto precision = os.precision(12);
    os << "n_e,h,n_dof,err_u,eoc_u,err_l2,eoc_l2,err_h1,eoc_h1,err_h1_semi,eoc_h1_semi,iterations\n";
    const auto eoc = [&](double v) -> std::ostream& {
        if (std::isnan(v)) return os << "";
        return os << v;
    };
    for (const auto& r : recs) {
        os << r.n_e << ',' << r.h << ',' << r.n_dof << ',' << r.err_u << ',';
        eoc(r.eoc_u) << ',' << r.err_l2 << ',';
        eoc(r.eoc_l2) << ',' << r.err_h1 << ',';
        eoc(r.eoc_h1) << ',' << r.err_h1_semi << ',';
        eoc(r.eoc_h1_semi) << ',' << r.iterations << '\n';
    }
    os.precision(precision);
}

double EigenSet::min_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : values) m = std::min(m, std::abs(z));
    return m;
}

double EigenSet::max_abs() const {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z));
    return m;
}

std::vector<EigenSet> eig_probe(const StudyConfig& cfg, Index cap) {
    cfg.validate();
    const auto g = make_graph(cfg.graph, cfg.controls, cfg.seed, cfg.euclidean);
    const auto m = mesh::build_mesh(g, cfg.n_e.front());
    std::vector<EigenSet> out;
    for (double beta : cfg.betas) {
        const auto ops = assembly::assemble(m, cfg.data(beta));
        const auto kkt = optcontrol::build_kkt(ops, beta);
        if (kkt.size() > cap)
            throw std::length_error("eig_probe: KKT size " + std::to_string(kkt.size()) +
                                    " exceeds cap " + std::to_string(cap));
        for (PreconKind kind : cfg.precons) {
            const auto p = optcontrol::build_preconditioner(kind, kkt);
            const auto a = optcontrol::preconditioned_kkt(kkt, p, cap);
            out.push_back({std::string(optcontrol::to_string(kind)), beta,
                           linalg::dense_eigs(a, kkt.size(), cap)});
        }
        const Index nm = kkt.n_free() + kkt.n_control();
        for (bool diagonal : {false, true}) {
            const auto a = optcontrol::preconditioned_mass_block(kkt, diagonal, cap);
            out.push_back({diagonal ? "mass_diag" : "mass_exact", beta, linalg::dense_eigs(a, nm, cap)});
        }
    }
    return out;
}

void write_eig_csv(std::ostream& os, const std::vector<EigenSet>& sets) {
    const auto precision = os.precision(12);
    os << "label,beta,re,im\n";
    for (const auto& s : sets)
        for (const auto& z : s.values) os << s.label << ',' << s.beta << ',' << z.real() << ',' << z.imag() << '\n';
    os.precision(precision);
}

}  // namespace mgoc::experiments
