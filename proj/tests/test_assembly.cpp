#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mgoc/assembly/assembly.hpp"
#include "mgoc/graphs/generators.hpp"
#include "mgoc/linalg/dense_eigs.hpp"
#include "support.hpp"

using namespace mgoc::assembly;
using namespace mgoc::testing;
using mgoc::graphs::make_fdm_L_graph;
using mgoc::graphs::make_star;
using mgoc::linalg::dot;
using mgoc::linalg::spmv;
using mgoc::mesh::build_mesh;

namespace {

MetricGraph single_edge(VertexType a = VertexType::Dirichlet, VertexType b = VertexType::Dirichlet) {
    return {mgoc::graphs::CombinatorialGraph(2, {{0, 1}}), {1.0}, {a, b}};
}

void check_dense(const SparseMatrix& a, const std::vector<double>& expect, double scale = 1.0) {
    const auto d = a.to_dense();
    REQUIRE(d.size() == expect.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(d[i] == doctest::Approx(expect[i] * scale).epsilon(1e-15));
}

bool symmetric(const SparseMatrix& a) {
    return mgoc::linalg::max_abs_diff(a, mgoc::linalg::transpose(a)) == 0.0;
}

}  // namespace

TEST_CASE("single edge with two intervals") {
    const auto m = build_mesh(single_edge(), 2);
    check_dense(assemble_stiffness(*m), {4, -2, -2, -2, 2, 0, -2, 0, 2});
    check_dense(assemble_mass(*m), {4, 1, 1, 1, 2, 0, 1, 0, 2}, 1.0 / 12.0);
}

TEST_CASE("single interval mass") {
    const auto m = build_mesh(single_edge(), 1);
    check_dense(assemble_mass(*m), {2, 1, 1, 2}, 1.0 / 6.0);
    check_dense(assemble_stiffness(*m), {1, -1, -1, 1});
}

TEST_CASE("star with one interval per edge gives the graph Laplacian") {
    const auto g = make_star(3, VertexType::Dirichlet);
    const auto A = assemble_stiffness(*build_mesh(g, 1));
    // DOF order is (centre, leaves) = vertex order here.
    CHECK(mgoc::linalg::max_abs_diff(A, mgoc::graphs::graph_laplacian(g.base())) < 1e-15);
}

TEST_CASE("incidence formulas agree with element-by-element assembly") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        const auto g = random_graph(rng, 12, 6, 3);
        for (Index n_e : {1, 2, 4, 8}) {
            const auto m = build_mesh(g, n_e);
            std::vector<double> coef(static_cast<std::size_t>(g.n_edges()));
            for (double& c : coef) c = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
            const auto ref = element_assembly(*m);
            const auto ref_c = element_assembly(*m, coef);
            CHECK(relative_diff(assemble_stiffness(*m), ref.A) <= 1e-14);
            CHECK(relative_diff(assemble_mass(*m), ref.M) <= 1e-14);
            CHECK(relative_diff(assemble_mass(*m, coef), ref_c.M) <= 1e-14);
        }
    }
}

TEST_CASE("operator properties") {
    const auto g = make_fdm_L_graph(6, 4, 7);
    const auto m = build_mesh(g, 4);
    ProblemData data;
    data.beta = 0.1;
    data.c0 = 2.0;
    data.f = 1.5;
    data.ybar = 1.0;
    const auto ops = assemble(m, data);
    CHECK(symmetric(ops.A));
    CHECK(symmetric(ops.M));
    CHECK(symmetric(ops.M_c0));
    CHECK(symmetric(ops.K));
    CHECK(ops.coercive);
    CHECK(mgoc::linalg::max_abs_diff(ops.Kb.DF, mgoc::linalg::transpose(ops.Kb.FD)) == 0.0);
    CHECK(mgoc::linalg::max_abs_diff(ops.K, mgoc::linalg::sp_add(ops.A, ops.M_c0)) < 1e-14);

    const Vector one(static_cast<std::size_t>(m->n_dof()), 1.0);
    for (double r : spmv(ops.A, one)) CHECK(std::abs(r) < 1e-12);
    CHECK(dot(one, spmv(ops.M, one)) == doctest::Approx(g.total_length()).epsilon(1e-13));

    // M positive definite, A positive semidefinite.
    const auto ev_m = mgoc::linalg::dense_symmetric_eigs(ops.M.to_dense(), m->n_dof());
    const auto ev_a = mgoc::linalg::dense_symmetric_eigs(ops.A.to_dense(), m->n_dof());
    CHECK(ev_m.front() > 0.0);
    CHECK(ev_a.front() > -1e-10);
}

TEST_CASE("load vectors") {
    const auto g = make_fdm_L_graph(6, 4, 7);
    const auto m = build_mesh(g, 3);
    const auto M = assemble_mass(*m);
    const Vector one(static_cast<std::size_t>(m->n_dof()), 1.0);
    const Vector b1 = assemble_load(*m, 1.0);
    const Vector m1 = spmv(M, one);
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i] == doctest::Approx(m1[i]).epsilon(1e-14));
    CHECK(std::accumulate(b1.begin(), b1.end(), 0.0) == doctest::Approx(g.total_length()));
    const Vector b15 = assemble_load(*m, 1.5);
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b15[i] == doctest::Approx(1.5 * m1[i]));

    // Hat function at an interior grid node of edge 2.
    const Index j = 1;
    const double h = m->h(2);
    const auto hat = EdgeField::sampled([&](Index e, double x) {
        return e == 2 ? std::max(0.0, 1.0 - std::abs(x - static_cast<double>(j) * h) / h) : 0.0;
    });
    const Vector bh = assemble_load(*m, hat);
    const Index k = m->interior_dof(2, j);
    for (Index i = 0; i < m->n_dof(); ++i) CHECK(bh[i] == doctest::Approx(M.coeff(i, k)).epsilon(1e-13));
}

TEST_CASE("block partition") {
    const auto g = make_star(4, VertexType::Dirichlet);
    for (Index n_e : {2, 4}) {
        const auto m = build_mesh(g, n_e);
        const auto ops = assemble(m, ProblemData{});
        CHECK(ops.Kb.FF.rows() + ops.Kb.DD.rows() == m->n_dof());
        // The Kirchhoff rows of K_FD vanish once every edge has an interior node.
        const auto kd = ops.Kb.FD.block(m->n_interior(), m->n_free(), 0, m->n_dirichlet());
        CHECK(mgoc::linalg::max_abs(kd) == 0.0);
    }
    const auto m1 = build_mesh(single_edge(VertexType::Kirchhoff, VertexType::Dirichlet), 1);
    ProblemData d1;
    d1.c0 = 1.0;
    const auto ops1 = assemble(m1, d1);
    CHECK(ops1.Kb.FF.rows() == 1);
    CHECK(ops1.Kb.FD.coeff(0, 0) != 0.0);
}

TEST_CASE("coercivity and data validation") {
    const auto free_edge = single_edge(VertexType::Kirchhoff, VertexType::Kirchhoff);
    const auto m = build_mesh(free_edge, 2);
    CHECK_FALSE(is_coercive(*m, 0.0));
    CHECK(is_coercive(*m, 1.0));
    ProblemData bad;
    bad.beta = 0.0;
    CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
    bad.beta = 1.0;
    bad.c0 = -1.0;
    CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
    CHECK_THROWS_AS(assemble_mass(*m, std::vector<double>{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EdgeField::per_edge({1.0, 2.0}).per_edge_values(3), std::invalid_argument);
}
