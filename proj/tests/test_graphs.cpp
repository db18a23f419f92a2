#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "mgoc/error.hpp"
#include "mgoc/graphs/generators.hpp"
#include "mgoc/graphs/graph.hpp"

using namespace mgoc::graphs;
using mgoc::linalg::max_abs_diff;
using mgoc::linalg::sp_mul;
using mgoc::linalg::transpose;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("incidence of the two-vertex path") {
    const CombinatorialGraph g(2, {{0, 1}});
    const auto E = incidence_matrix(g);
    CHECK(E.coeff(0, 0) == -1.0);
    CHECK(E.coeff(1, 0) == 1.0);
    CHECK(sp_mul(E, transpose(E)).to_dense() == std::vector<double>{1, -1, -1, 1});
    CHECK(graph_laplacian(g).to_dense() == std::vector<double>{1, -1, -1, 1});
    CHECK(normalized_laplacian(g).to_dense() == std::vector<double>{1, -1, -1, 1});
}

TEST_CASE("E E^T equals D - W for a small star") {
    const CombinatorialGraph g(3, {{0, 1}, {0, 2}});
    const auto EEt = sp_mul(incidence_matrix(g), transpose(incidence_matrix(g)));
    CHECK(EEt.to_dense() == std::vector<double>{2, -1, -1, -1, 1, 0, -1, 0, 1});
    CHECK(max_abs_diff(EEt, graph_laplacian(g)) == 0.0);
}

TEST_CASE("degenerate graphs") {
    const CombinatorialGraph empty(3, {});
    const auto E = incidence_matrix(empty);
    CHECK(E.rows() == 3);
    CHECK(E.cols() == 0);
    CHECK(mgoc::linalg::max_abs(sp_mul(E, transpose(E))) == 0.0);
    const CombinatorialGraph single(1, {});
    CHECK(graph_laplacian(single).to_dense() == std::vector<double>{0.0});
    CHECK_THROWS_AS(normalized_laplacian(single), std::domain_error);
}

TEST_CASE("triangle Laplacian") {
    const CombinatorialGraph g(3, {{0, 1}, {1, 2}, {2, 0}});
    const auto L = graph_laplacian(g).to_dense();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(L[i * 3 + j] == (i == j ? 2.0 : -1.0));
}

TEST_CASE("weighted Laplacian is E diag(w) E^T and weights are symmetric") {
    const CombinatorialGraph g(4, {{0, 1}, {1, 2}, {3, 1}}, {2.0, 0.5, 3.0});
    const auto E = incidence_matrix(g);
    const auto W = mgoc::linalg::SparseMatrix::diagonal(g.edge_weights());
    CHECK(max_abs_diff(sp_mul(E, sp_mul(W, transpose(E))), graph_laplacian(g)) < 1e-15);
    CHECK(g.weight(1, 3) == 3.0);
    CHECK(g.weight(3, 1) == 3.0);
    CHECK(g.weight(0, 2) == 0.0);
    CHECK(g.degree(1) == doctest::Approx(5.5));
    const auto rs = mgoc::linalg::row_lump(graph_laplacian(g));
    for (double r : rs) CHECK(std::abs(r) < 1e-15);
}

TEST_CASE("graph construction rejects invalid input") {
    CHECK_THROWS_AS(CombinatorialGraph(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(CombinatorialGraph(2, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(CombinatorialGraph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(CombinatorialGraph(2, {{0, 1}}, {0.0}), std::invalid_argument);
    const CombinatorialGraph g(2, {{0, 1}});
    CHECK_THROWS_AS(MetricGraph(g, {-1.0}, {VertexType::Dirichlet, VertexType::Kirchhoff}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph(g, {}, {VertexType::Dirichlet}), std::invalid_argument);
}

TEST_CASE("stars") {
    const auto s3 = make_star(3, VertexType::Dirichlet);
    CHECK(s3.n_vertices() == 4);
    CHECK(s3.n_edges() == 3);
    CHECK(s3.dirichlet_nodes().size() == 3);
    CHECK(s3.kirchhoff_nodes() == std::vector<Index>{0});
    const auto s1 = make_star(1, VertexType::Dirichlet);
    CHECK(s1.n_edges() == 1);
    CHECK(s1.dirichlet_nodes().size() == 1);
    const auto s12 = make_star(12, VertexType::Dirichlet);
    CHECK(s12.n_vertices() == 13);
    CHECK(s12.n_edges() == 12);
    CHECK(s12.total_length() == doctest::Approx(12.0));
    CHECK_THROWS_AS(make_star(0, VertexType::Dirichlet), std::invalid_argument);
}

TEST_CASE("L-shaped lattice graph") {
    const auto g = make_fdm_L_graph(10, 12, 1);
    CHECK(g.n_vertices() == 75);
    CHECK(g.n_edges() == 130);
    CHECK(g.dirichlet_nodes().size() == 12);
    CHECK(g.kirchhoff_nodes().size() == 63);
    const auto again = make_fdm_L_graph(10, 12, 1);
    CHECK(again.dirichlet_nodes() == g.dirichlet_nodes());
    const auto other = make_fdm_L_graph(10, 12, 2);
    CHECK(other.dirichlet_nodes() != g.dirichlet_nodes());
    // Lattice adjacency: every vertex has degree between 2 and 4.
    for (Index v = 0; v < g.n_vertices(); ++v) {
        CHECK(g.base().degree(v) >= 2.0);
        CHECK(g.base().degree(v) <= 4.0);
    }
}

TEST_CASE("random Dirichlet types") {
    const auto t = random_dirichlet_types(20, 5, 42);
    CHECK(std::count(t.begin(), t.end(), VertexType::Dirichlet) == 5);
    CHECK(t == random_dirichlet_types(20, 5, 42));
    CHECK_THROWS_AS(random_dirichlet_types(3, 4, 1), std::invalid_argument);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) CHECK(uniform_below(rng, 7) < 7);
}

TEST_CASE("MatrixMarket graphs") {
    SUBCASE("pattern path") {
        const auto p = write_temp("mgoc_path.mtx",
                                  "%%MatrixMarket matrix coordinate pattern general\n3 3 2\n2 1\n3 2\n");
        const auto g = load_matrix_market(p);
        CHECK(g.n_vertices() == 3);
        CHECK(g.n_edges() == 2);
        CHECK(g.weight(0, 1) == 1.0);
        CHECK(g.weight(1, 2) == 1.0);
        CHECK(g.weight(0, 2) == 0.0);
        std::filesystem::remove(p);
    }
    SUBCASE("duplicates and diagonal") {
        const auto p = write_temp(
            "mgoc_dup.mtx",
            "%%MatrixMarket matrix coordinate real general\n2 2 3\n2 1 -4\n1 2 -4\n1 1 9\n");
        const auto g = load_matrix_market(p);
        CHECK(g.n_edges() == 1);
        CHECK(g.weight(0, 1) == 4.0);
        std::filesystem::remove(p);
    }
    SUBCASE("coordinates and Euclidean lengths") {
        const auto p = write_temp("mgoc_xy.mtx",
                                  "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n");
        const auto c = write_temp("mgoc_xy_coord.mtx",
                                  "%%MatrixMarket matrix array real general\n3 2\n0\n3\n0\n0\n0\n4\n");
        const auto g = load_matrix_market(p);
        REQUIRE(g.coordinates().has_value());
        const auto len = edge_lengths(g, LengthRule::Euclidean);
        std::vector<double> sorted(len.begin(), len.end());
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted[0] == doctest::Approx(3.0));
        CHECK(sorted[1] == doctest::Approx(5.0));
        CHECK(edge_lengths(g, LengthRule::Unit) == std::vector<double>{1.0, 1.0});
        std::filesystem::remove(p);
        std::filesystem::remove(c);
    }
    SUBCASE("errors") {
        const auto p = write_temp("mgoc_rect.mtx",
                                  "%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n");
        CHECK_THROWS_AS(load_matrix_market(p), mgoc::ParseError);
        std::filesystem::remove(p);
        CHECK_THROWS(load_matrix_market("/nonexistent/file.mtx"));
    }
}

TEST_CASE("graph JSON round trip and errors") {
    const auto g = make_fdm_L_graph(6, 4, 3);
    const auto h = parse_graph_json(to_graph_json(g));
    CHECK(h.n_vertices() == g.n_vertices());
    CHECK(h.n_edges() == g.n_edges());
    CHECK(h.dirichlet_nodes() == g.dirichlet_nodes());
    for (Index e = 0; e < g.n_edges(); ++e) {
        CHECK(h.edges()[e].tail == g.edges()[e].tail);
        CHECK(h.edges()[e].head == g.edges()[e].head);
        CHECK(h.length(e) == g.length(e));
    }
    const auto j = parse_graph_json(R"({"vertices":[{"id":0,"type":"dirichlet"},{"id":1,"type":"kirchhoff"}],
                                        "edges":[{"u":0,"v":1,"length":2.5}]})");
    CHECK(j.length(0) == 2.5);
    CHECK(j.vertex_type(0) == VertexType::Dirichlet);
    CHECK_THROWS_AS(parse_graph_json("{not json"), mgoc::ParseError);
    CHECK_THROWS_AS(parse_graph_json(R"({"vertices":[{"id":0,"type":"bogus"}],"edges":[]})"),
                    mgoc::ParseError);
    CHECK_THROWS_AS(
        parse_graph_json(R"({"vertices":[{"id":0,"type":"dirichlet"}],"edges":[{"u":0,"v":5}]})"),
        mgoc::ParseError);
}
