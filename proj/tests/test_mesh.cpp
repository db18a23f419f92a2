#include <doctest.h>

#include <cmath>
#include <random>

#include "mgoc/assembly/assembly.hpp"
#include "mgoc/graphs/generators.hpp"
#include "mgoc/mesh/mesh.hpp"

using namespace mgoc::mesh;
using mgoc::graphs::make_fdm_L_graph;
using mgoc::graphs::make_star;
using mgoc::graphs::VertexType;

namespace {

MetricGraph single_edge(double length = 1.0) {
    return {mgoc::graphs::CombinatorialGraph(2, {{0, 1}}), {length},
            {VertexType::Dirichlet, VertexType::Dirichlet}};
}

}  // namespace

TEST_CASE("DOF counts") {
    CHECK(build_mesh(single_edge(), 4)->n_dof() == 5);
    CHECK(build_mesh(single_edge(), 4)->n_interior() == 3);
    CHECK(build_mesh(make_star(12, VertexType::Dirichlet), 8)->n_dof() == 97);
    const auto L = build_mesh(make_fdm_L_graph(10, 12, 1), 65);
    CHECK(L->n_dof() == 8395);
    CHECK(L->n_free() + L->n_dirichlet() == L->n_dof());
    CHECK(L->h_max() == doctest::Approx(1.0 / 65));
    CHECK_THROWS_AS(build_mesh(single_edge(), 0), std::invalid_argument);
}

TEST_CASE("DOF order is a bijection with blocks interior, Kirchhoff, Dirichlet") {
    const auto m = build_mesh(make_fdm_L_graph(6, 5, 4), 3);
    Index last_kind = 0;
    for (Index k = 0; k < m->n_dof(); ++k) {
        const DofRef r = m->dof(k);
        CHECK(m->index_of(r) == k);
        const auto kind = static_cast<Index>(r.kind);
        CHECK(kind >= last_kind);
        last_kind = kind;
        if (r.kind == DofKind::Dirichlet) CHECK(k >= m->n_free());
        else CHECK(k < m->n_free());
    }
    // Interior DOFs run edge by edge, j = 1..n_e-1.
    Index k = 0;
    for (Index e = 0; e < m->n_edges(); ++e)
        for (Index j = 1; j < 3; ++j, ++k) {
            CHECK(m->interior_dof(e, j) == k);
            CHECK(m->node_dof(e, j) == k);
        }
    const auto& dn = m->graph().dirichlet_nodes();
    for (std::size_t i = 0; i < dn.size(); ++i)
        CHECK(m->vertex_dof(dn[i]) == m->n_free() + static_cast<Index>(i));
    CHECK_THROWS(m->dof(m->n_dof()));
}

TEST_CASE("node_dof hits the edge's endpoints") {
    const auto g = make_star(3, VertexType::Dirichlet);
    const auto m = build_mesh(g, 4);
    for (Index e = 0; e < g.n_edges(); ++e) {
        CHECK(m->node_dof(e, 0) == m->vertex_dof(g.edges()[e].head));
        CHECK(m->node_dof(e, 4) == m->vertex_dof(g.edges()[e].tail));
    }
}

TEST_CASE("interior incidence") {
    const auto e2 = interior_incidence(*build_mesh(single_edge(), 2));
    CHECK(e2.rows() == 1);
    CHECK(e2.to_dense() == std::vector<double>{-1, 1});
    const auto e3 = interior_incidence(*build_mesh(single_edge(), 3));
    CHECK(e3.to_dense() == std::vector<double>{-1, 1, 0, 0, -1, 1});
    const MetricGraph two(mgoc::graphs::CombinatorialGraph(3, {{0, 1}, {1, 2}}), {},
                          {VertexType::Dirichlet, VertexType::Kirchhoff, VertexType::Dirichlet});
    const auto e22 = interior_incidence(*build_mesh(two, 2));
    CHECK(e22.to_dense() == std::vector<double>{-1, 1, 0, 0, 0, 0, -1, 1});
    CHECK(interior_incidence(*build_mesh(two, 1)).rows() == 0);
}

TEST_CASE("vertex incidence") {
    const auto ev = vertex_incidence(*build_mesh(single_edge(), 2));
    // Edge 0 -> 1: head is vertex 1, tail vertex 0.
    CHECK(ev.rows() == 2);
    CHECK(ev.cols() == 2);
    CHECK(ev.coeff(1, 0) == 1.0);
    CHECK(ev.coeff(0, 1) == -1.0);
    CHECK(ev.nnz() == 2);
    const auto star = vertex_incidence(*build_mesh(make_star(3, VertexType::Dirichlet), 2));
    CHECK(star.rows() == 4);
    CHECK(star.cols() == 6);
    CHECK(star.nnz() == 6);
}

TEST_CASE("every column of the extended incidence holds one +1 and one -1") {
    for (Index n_e : {1, 2, 5}) {
        const auto m = build_mesh(make_fdm_L_graph(6, 5, 2), n_e);
        const auto Et = mgoc::linalg::transpose(extended_incidence(*m));
        CHECK(Et.rows() == m->n_cells());
        for (Index c = 0; c < Et.rows(); ++c) {
            const auto lo = Et.row_ptr()[c], hi = Et.row_ptr()[c + 1];
            REQUIRE(hi - lo == 2);
            CHECK(Et.values()[lo] + Et.values()[lo + 1] == 0.0);
            CHECK(std::abs(Et.values()[lo]) == 1.0);
        }
    }
}

TEST_CASE("prolongation") {
    const auto g = make_star(3, VertexType::Dirichlet);
    const auto coarse = build_mesh(g, 2);
    const auto fine = build_mesh(g, 4);

    SUBCASE("constants") {
        const PiecewiseLinearFunction c{coarse, Vector(coarse->n_dof(), 2.5)};
        for (double v : prolong(c, fine).values) CHECK(v == 2.5);
    }
    SUBCASE("hat at an edge midpoint") {
        PiecewiseLinearFunction hat{coarse, Vector(coarse->n_dof(), 0.0)};
        hat.values[coarse->interior_dof(1, 1)] = 1.0;
        const auto p = prolong(hat, fine);
        const double expect[] = {0.0, 0.5, 1.0, 0.5, 0.0};
        for (Index j = 0; j <= 4; ++j) CHECK(p.at_node(1, j) == expect[j]);
        CHECK(p.at_node(0, 2) == 0.0);
    }
    SUBCASE("restriction inverts prolongation; norms are preserved") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        PiecewiseLinearFunction f{coarse, Vector(coarse->n_dof())};
        for (double& v : f.values) v = u(rng);
        const auto p = prolong(f, fine);
        CHECK(restrict_nodal(p, coarse).values == f.values);
        const auto A0 = mgoc::assembly::assemble_stiffness(*coarse);
        const auto A1 = mgoc::assembly::assemble_stiffness(*fine);
        const auto M0 = mgoc::assembly::assemble_mass(*coarse);
        const auto M1 = mgoc::assembly::assemble_mass(*fine);
        using mgoc::linalg::dot;
        using mgoc::linalg::spmv;
        CHECK(dot(p.values, spmv(A1, p.values)) ==
              doctest::Approx(dot(f.values, spmv(A0, f.values))).epsilon(1e-13));
        CHECK(dot(p.values, spmv(M1, p.values)) ==
              doctest::Approx(dot(f.values, spmv(M0, f.values))).epsilon(1e-13));
    }
    SUBCASE("non-nested meshes") {
        const PiecewiseLinearFunction f{coarse, Vector(coarse->n_dof(), 0.0)};
        CHECK_THROWS_AS(prolong(f, build_mesh(g, 3)), std::invalid_argument);
        CHECK_THROWS_AS(prolong(f, build_mesh(make_star(4, VertexType::Dirichlet), 4)),
                        std::invalid_argument);
    }
}
