#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mgoc/experiments/studies.hpp"
#include "mgoc/linalg/matrix_market.hpp"

namespace mgoc::experiments {

namespace {

struct Args {
    std::string graph;
    std::vector<Index> ne;
    std::vector<double> beta;
    double c0 = 2.0;
    double f = 1.5;
    double ybar = 1.0;
    std::string solver = "gmres";
    std::vector<std::string> precon;
    double tol = 1e-8;
    Index maxit = 0;
    std::uint64_t seed = 1;
    Index controls = 12;
    std::string out;
    int jobs = 1;
    std::string dump;
    bool euclidean = false;
    Index reference = 0;
    bool no_unprec = false;
    Index unprec_maxit = 0;
};

void add_common(CLI::App* sub, Args& a) {
    sub->add_option("--graph", a.graph, "star:K, path:N, fdmL:N, or a .json/.mtx file");
    sub->add_option("--ne", a.ne, "intervals per edge (list for sweeps)");
    sub->add_option("--beta", a.beta, "regularization parameter(s)");
    sub->add_option("--c0", a.c0, "potential (constant)")->capture_default_str();
    sub->add_option("--f", a.f, "source (constant)")->capture_default_str();
    sub->add_option("--ybar", a.ybar, "desired state (constant)")->capture_default_str();
    sub->add_option("--solver", a.solver, "gmres|minres")
        ->check(CLI::IsMember({"gmres", "minres"}))
        ->capture_default_str();
    sub->add_option("--precon", a.precon, "none|ideal|sym|nonsym (list for eig-probe)")
        ->check(CLI::IsMember({"none", "ideal", "sym", "nonsym"}));
    sub->add_option("--tol", a.tol, "relative residual tolerance")->capture_default_str();
    sub->add_option("--maxit", a.maxit, "iteration cap (0: default)");
    sub->add_option("--seed", a.seed, "seed for random control vertices")->capture_default_str();
    sub->add_option("--controls", a.controls, "number of random Dirichlet vertices")
        ->capture_default_str();
    sub->add_option("--out", a.out, "CSV output path (default: stdout)");
    sub->add_option("--jobs", a.jobs, "parallel sweep cells")->capture_default_str();
    sub->add_flag("--euclidean", a.euclidean, "edge lengths from coordinates for file graphs");
}

StudyConfig to_config(const Args& a) {
    StudyConfig c;
    c.graph = a.graph;
    c.n_e = a.ne;
    c.betas = a.beta;
    c.c0 = a.c0;
    c.f = a.f;
    c.ybar = a.ybar;
    c.solver = optcontrol::parse_solver_kind(a.solver);
    c.precons.clear();
    for (const auto& p : a.precon) c.precons.push_back(optcontrol::parse_precon_kind(p));
    c.tol = a.tol;
    c.max_it = a.maxit;
    c.seed = a.seed;
    c.controls = a.controls;
    c.jobs = a.jobs;
    c.euclidean = a.euclidean;
    c.reference_n_e = a.reference;
    c.unpreconditioned = !a.no_unprec;
    c.unprec_max_it = a.unprec_maxit;
    return c;
}

template <class Write>
void emit(const std::string& path, Write write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(os);
}

template <class T>
void default_to(std::vector<T>& v, std::vector<T> d) {
    if (v.empty()) v = std::move(d);
}

int run_solve(Args a) {
    if (a.graph.empty()) a.graph = "star:12";
    default_to(a.ne, {64});
    default_to(a.beta, {1e-2});
    default_to(a.precon, {a.solver == "minres" ? std::string("sym") : std::string("nonsym")});
    const StudyConfig cfg = to_config(a);
    cfg.validate();

    const auto g = make_graph(cfg.graph, cfg.controls, cfg.seed, cfg.euclidean);
    const auto m = mesh::build_mesh(g, cfg.n_e.front());
    const auto data = cfg.data(cfg.betas.front());
    const auto ops = assembly::assemble(m, data);
    if (!a.dump.empty()) {
        std::filesystem::create_directories(a.dump);
        const std::filesystem::path dir(a.dump);
        linalg::write_matrix_market(ops.A, dir / "A.mtx", "stiffness");
        linalg::write_matrix_market(ops.M, dir / "M.mtx", "mass");
        linalg::write_matrix_market(ops.K, dir / "K.mtx", "stiffness plus potential");
    }
    const optcontrol::SolveOptions opts{cfg.solver, cfg.precons.front(), cfg.tol, cfg.max_it};
    const auto s = optcontrol::solve_kkt(ops, data.beta, opts);

    std::cout << "n_dof " << s.stats.n_dof << "\n"
              << "kkt_size " << s.stats.kkt_size << "\n"
              << "iterations " << s.stats.iterations << (s.stats.converged ? "" : " (not converged)")
              << "\n"
              << "residual " << s.stats.relative_residual << "\n"
              << "optimality_residual " << s.stats.optimality_residual << "\n"
              << "objective " << optcontrol::objective(ops, data, s.y.values, s.u) << "\n"
              << "control_norm " << linalg::norm2(s.u) << "\n"
              << "setup_seconds " << s.stats.setup_seconds << "\n"
              << "solve_seconds " << s.stats.solve_seconds << "\n";
    if (!a.out.empty()) {
        emit(a.out, [&](std::ostream& os) {
            os.precision(12);
            os << "vertex,u\n";
            const auto& dn = g.dirichlet_nodes();
            for (std::size_t k = 0; k < dn.size(); ++k) os << dn[k] << ',' << s.u[k] << '\n';
        });
    }
    return s.stats.converged ? 0 : 1;
}

int run_iteration_study(Args a) {
    if (a.graph.empty()) a.graph = "star:12";
    default_to(a.ne, {8, 16, 32, 64, 128, 256, 512});
    default_to(a.beta, {1e-2, 1e-3, 1e-4, 1e-5});
    default_to(a.precon, {std::string("nonsym")});
    const auto cells = iteration_study(to_config(a));
    emit(a.out, [&](std::ostream& os) { write_iteration_csv(os, cells); });
    return 0;
}

int run_convergence_study(Args a) {
    if (a.graph.empty()) a.graph = "fdmL:10";
    default_to(a.ne, {8, 16, 32, 64, 128});
    default_to(a.beta, {0.1});
    default_to(a.precon, {std::string("nonsym")});
    const auto recs = convergence_study(to_config(a));
    emit(a.out, [&](std::ostream& os) { write_convergence_csv(os, recs); });
    return 0;
}

int run_eig_probe(Args a) {
    if (a.graph.empty()) a.graph = "star:12";
    default_to(a.ne, {16});
    default_to(a.beta, {1e-2, 1e-3});
    default_to(a.precon, {std::string("ideal"), std::string("sym"), std::string("nonsym")});
    const auto sets = eig_probe(to_config(a));
    for (const auto& s : sets)
        std::cerr << s.label << " beta=" << s.beta << " min|l|=" << s.min_abs()
                  << " max|l|=" << s.max_abs() << "\n";
    emit(a.out, [&](std::ostream& os) { write_eig_csv(os, sets); });
    return 0;
}

int run_graph_info(Args a) {
    if (a.graph.empty()) a.graph = "star:12";
    const auto g = make_graph(a.graph, a.controls, a.seed, a.euclidean);
    std::cout << g.n_vertices() << " vertices, " << g.n_edges() << " edges\n"
              << g.dirichlet_nodes().size() << " dirichlet, " << g.kirchhoff_nodes().size()
              << " kirchhoff\n"
              << "total length " << g.total_length() << "\n";
    if (!a.ne.empty()) {
        for (Index k : a.ne)
            std::cout << "n_e " << k << ": n_dof " << mesh::build_mesh(g, k)->n_dof() << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Optimal Dirichlet control on metric graphs", "mgoc"};
    app.require_subcommand(1);
    Args args;

    auto* solve = app.add_subcommand("solve", "solve one optimal control problem");
    add_common(solve, args);
    solve->add_option("--dump-matrices", args.dump, "write A, M, K as MatrixMarket into DIR");

    auto* iter = app.add_subcommand("iteration-study", "iteration counts over beta and n_e");
    add_common(iter, args);
    iter->add_flag("--no-unprec", args.no_unprec, "skip the unpreconditioned comparison");
    iter->add_option("--unprec-maxit", args.unprec_maxit, "cap for unpreconditioned runs");

    auto* conv = app.add_subcommand("convergence-study", "discretization errors and rates");
    add_common(conv, args);
    conv->add_option("--reference", args.reference, "reference n_e (default 4x finest)");

    auto* eig = app.add_subcommand("eig-probe", "spectra of preconditioned operators");
    add_common(eig, args);

    auto* info = app.add_subcommand("graph-info", "print graph statistics");
    add_common(info, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*solve) return run_solve(args);
        if (*iter) return run_iteration_study(args);
        if (*conv) return run_convergence_study(args);
        if (*eig) return run_eig_probe(args);
        return run_graph_info(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mgoc::experiments
